//! The two-source combination example on the frame {a, b, c}.

use std::fmt::Write as _;

use evidential::{FocalSet, Frame, MassFunction};

use crate::CliError;

/// Focal sets in table order with the masses of both sources, in hundredths.
const TABLE: [(&[&str], u64, u64); 7] = [
    (&["a"], 30, 20),
    (&["b"], 30, 30),
    (&["a", "b"], 10, 10),
    (&["c"], 0, 10),
    (&["a", "c"], 10, 0),
    (&["b", "c"], 10, 20),
    (&["a", "b", "c"], 10, 10),
];

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A reduced fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Ratio {
        let g = gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DempsterDemo {
    pub conflict: Ratio,
    pub conflict_decimal: f64,
    /// Label key, exact mass, floating-point mass from the combination rule.
    pub masses: Vec<(String, Ratio, f64)>,
}

/// Combines the two sources twice: exactly in integer hundredths, and with
/// the floating-point rule.
pub fn dempster_demo() -> Result<DempsterDemo, CliError> {
    let frame = Frame::new(["a", "b", "c"]).map_err(CliError::runtime)?;
    let sets: Vec<FocalSet> = TABLE
        .iter()
        .map(|(l, _, _)| frame.set_of(l))
        .collect::<Result<_, _>>()
        .map_err(CliError::runtime)?;
    let source = |pick: fn(&(&[&str], u64, u64)) -> u64| {
        MassFunction::from_assignments(
            &frame,
            sets.iter()
                .zip(&TABLE)
                .map(|(&s, row)| (s, pick(row) as f64 / 100.0)),
        )
    };
    let m1 = source(|r| r.1).map_err(CliError::runtime)?;
    let m2 = source(|r| r.2).map_err(CliError::runtime)?;
    let fused = m1.combine(&m2).map_err(CliError::runtime)?;

    // products are in units of 1e-4
    let mut exact = [0u64; 8];
    for (b, r1) in sets.iter().zip(&TABLE) {
        for (d, r2) in sets.iter().zip(&TABLE) {
            exact[b.intersect(*d).bits() as usize] += r1.1 * r2.2;
        }
    }
    let conflict = exact[0];
    let normalizer = 10_000 - conflict;
    let masses = sets
        .iter()
        .map(|&s| {
            (
                frame.key(s),
                Ratio::new(exact[s.bits() as usize], normalizer),
                fused.mass.mass(s),
            )
        })
        .collect();
    Ok(DempsterDemo {
        conflict: Ratio::new(conflict, 10_000),
        conflict_decimal: fused.conflict,
        masses,
    })
}

pub fn cmd_demo_dempster() -> Result<String, CliError> {
    let demo = dempster_demo()?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "kappa = {}/{} = {:.2}",
        demo.conflict.num, demo.conflict.den, demo.conflict_decimal
    );
    let _ = writeln!(out, "set,fraction,decimal");
    for (key, r, v) in &demo.masses {
        // every mass shares the denominator 1 - kappa = 67/100
        let scale = 67 / r.den;
        let _ = writeln!(out, "{{{key}}},{}/67,{v:.15}", r.num * scale);
    }
    Ok(out)
}
