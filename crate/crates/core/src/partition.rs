//! Concrete colored partitions and their canonical text form.
//!
//! The element `0` is never stored: the zero-block holds only the elements
//! of `[n]` that share a block with `0`. Colors are indices starting at 1.
//!
//! Text form: `0:` followed by the zero-block pairs, then each non-zero
//! block prefixed by `/`, e.g. `0:(2,1)/(1,1)` or `0:/(1,1)(2,2)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ColorParams;

/// An element of `[n]` with its color index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tagged {
    pub element: usize,
    pub color: u32,
}

impl Tagged {
    pub fn new(element: usize, color: u32) -> Self {
        Self { element, color }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColoredPartition {
    pub n: usize,
    pub zero_block: Vec<Tagged>,
    pub nonzero_blocks: Vec<Vec<Tagged>>,
}

impl ColoredPartition {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            zero_block: Vec::new(),
            nonzero_blocks: Vec::new(),
        }
    }

    /// Builds a partition with every block sorted by element and the
    /// non-zero blocks ordered by their minima. No other checks are made.
    pub fn normalized(n: usize, mut zero_block: Vec<Tagged>, blocks: Vec<Vec<Tagged>>) -> Self {
        zero_block.sort();
        let mut nonzero_blocks: Vec<Vec<Tagged>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort();
                b
            })
            .collect();
        nonzero_blocks.sort_by_key(|b| b.first().map(|t| t.element));
        Self {
            n,
            zero_block,
            nonzero_blocks,
        }
    }

    /// Number of non-zero blocks.
    pub fn k(&self) -> usize {
        self.nonzero_blocks.len()
    }

    /// Checks the coloring rules and block structure against `params`.
    pub fn check(&self, params: &ColorParams) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidPartition(msg));
        let mut seen = vec![false; self.n + 1];
        let mut mark = |t: &Tagged| -> Result<()> {
            if t.element == 0 || t.element > self.n {
                return invalid(format!("element {} outside [1, {}]", t.element, self.n));
            }
            if seen[t.element] {
                return invalid(format!("element {} appears twice", t.element));
            }
            seen[t.element] = true;
            Ok(())
        };
        for t in &self.zero_block {
            mark(t)?;
            if t.color == 0 || t.color > params.c() {
                return invalid(format!(
                    "zero-block element {} has color {} outside 1..={}",
                    t.element,
                    t.color,
                    params.c()
                ));
            }
        }
        let mut previous_min = 0;
        for block in &self.nonzero_blocks {
            let Some(min) = block.iter().min_by_key(|t| t.element) else {
                return invalid("empty non-zero block".to_owned());
            };
            if min.color != 1 {
                return invalid(format!(
                    "block minimum {} carries color {} instead of 1",
                    min.element, min.color
                ));
            }
            if min.element <= previous_min {
                return invalid("non-zero blocks not ordered by ascending minimum".to_owned());
            }
            previous_min = min.element;
            for t in block {
                mark(t)?;
                if t.color == 0 || t.color > params.m() {
                    return invalid(format!(
                        "element {} has color {} outside 1..={}",
                        t.element,
                        t.color,
                        params.m()
                    ));
                }
            }
        }
        if let Some(missing) = (1..=self.n).find(|&e| !seen[e]) {
            return invalid(format!("element {missing} is not covered"));
        }
        Ok(())
    }
}

fn write_pairs(f: &mut fmt::Formatter<'_>, pairs: &[Tagged]) -> fmt::Result {
    for t in pairs {
        write!(f, "({},{})", t.element, t.color)?;
    }
    Ok(())
}

impl fmt::Display for ColoredPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("0:")?;
        write_pairs(f, &self.zero_block)?;
        for block in &self.nonzero_blocks {
            f.write_str("/")?;
            write_pairs(f, block)?;
        }
        Ok(())
    }
}

fn parse_pairs(text: &str, whole: &str) -> Result<Vec<Tagged>> {
    let err = |reason: &str| Error::Parse {
        text: whole.to_owned(),
        reason: reason.to_owned(),
    };
    let mut out = Vec::new();
    let mut rest = text;
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| err("expected '('"))?;
        let close = body.find(')').ok_or_else(|| err("unclosed '('"))?;
        let (e, c) = body[..close]
            .split_once(',')
            .ok_or_else(|| err("pair without ','"))?;
        let element = e.trim().parse().map_err(|_| err("bad element"))?;
        let color = c.trim().parse().map_err(|_| err("bad color"))?;
        out.push(Tagged { element, color });
        rest = &body[close + 1..];
    }
    Ok(out)
}

impl FromStr for ColoredPartition {
    type Err = Error;

    /// Parses the canonical text form. `n` is taken as the largest element
    /// mentioned (0 for the empty partition).
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().strip_prefix("0:").ok_or_else(|| Error::Parse {
            text: s.to_owned(),
            reason: "missing leading \"0:\"".to_owned(),
        })?;
        let mut parts = body.split('/');
        let zero_block = parse_pairs(parts.next().unwrap_or(""), s)?;
        let nonzero_blocks = parts
            .map(|p| parse_pairs(p, s))
            .collect::<Result<Vec<_>>>()?;
        let n = zero_block
            .iter()
            .chain(nonzero_blocks.iter().flatten())
            .map(|t| t.element)
            .max()
            .unwrap_or(0);
        Ok(Self {
            n,
            zero_block,
            nonzero_blocks,
        })
    }
}
