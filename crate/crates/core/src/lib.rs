pub mod baker;
pub mod bivar;
pub mod bridge;
pub mod curve;
pub mod error;
pub mod fixtures;
pub mod flow;
pub mod identities;
pub mod kp;
pub mod poly;
pub mod report;
pub mod scalar;
