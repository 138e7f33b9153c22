mod bananas;
pub mod bba;
pub mod cluster;
pub mod dempster;
pub mod fuse;
pub mod train;

pub use bananas::cmd_bananas;
pub use bba::{cmd_bba, BbaParams, Method};
pub use cluster::{cmd_ecm, cmd_fcm, EcmParams};
pub use dempster::cmd_demo_dempster;
pub use fuse::{cmd_fuse, Betas};
pub use train::{cmd_predict, cmd_train, Classifier, TrainParams};
