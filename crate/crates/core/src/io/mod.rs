//! File formats and instance generators.

pub mod format;
pub mod generate;

pub use format::{
    parse_allocation, parse_instance, parse_instance_str, parse_payments, serialize_instance, ResultFile,
};
pub use generate::{generate, GenClass, GenParams};
