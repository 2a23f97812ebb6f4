use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Palette sizes `(c, m)`: `c` colors for the zero-block, `m` for the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColorParams {
    c: u32,
    m: u32,
}

impl ColorParams {
    pub fn new(c: u32, m: u32) -> Result<Self> {
        if c == 0 || m == 0 {
            return Err(Error::InvalidParams { c, m });
        }
        Ok(Self { c, m })
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn m(&self) -> u32 {
        self.m
    }
}

impl fmt::Display for ColorParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(c={}, m={})", self.c, self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_palettes() {
        assert_eq!(
            ColorParams::new(0, 1),
            Err(Error::InvalidParams { c: 0, m: 1 })
        );
        assert!(ColorParams::new(1, 0).is_err());
        assert!(ColorParams::new(1, 1).is_ok());
    }
}
