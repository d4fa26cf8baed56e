use thiserror::Error;

/// Errors raised when an operation's input contract is violated.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("word width mismatch: {left} vs {right} bits")]
    WidthMismatch { left: u32, right: u32 },
    #[error("word width must be in 1..={max}, got {width}")]
    InvalidWidth { width: u32, max: u32 },
    #[error("value {value:#x} does not fit in {width} bits")]
    ValueTooWide { value: u64, width: u32 },
    #[error("bit position {position} out of range for {width}-bit word")]
    BitOutOfRange { position: u32, width: u32 },
    #[error("duplicate stuck-at entry for bit position {0}")]
    DuplicateBit(u32),
    #[error("at least 2 module outputs are required, got {0}")]
    TooFewModules(usize),
    #[error("at most {max} module outputs are supported, got {got}")]
    TooManyModules { got: usize, max: usize },
    #[error("expected {expected} module outputs, got {got}")]
    ModuleCountMismatch { expected: usize, got: usize },
    #[error("parameter `{name}` = {value} is out of range {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("cannot pick {requested} distinct bits from a {width}-bit word")]
    TooManyBits { requested: u32, width: u32 },
    #[error("availability is undefined for zero outputs")]
    EmptyCount,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name,
            value,
            range: "[0, 1]",
        })
    }
}
