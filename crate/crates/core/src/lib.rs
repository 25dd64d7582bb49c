pub mod curve;
pub mod dilog;
pub mod error;
pub mod evaluate;
pub mod measure;
pub mod paths;
pub mod polyio;
pub mod relations;
pub mod roots;
pub mod scalar;
pub mod zeta;
