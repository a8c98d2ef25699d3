//! Mask text formats.
//!
//! RLE lines look like `RLE <height> <width> <run1> <run2> ...`: row-major
//! run lengths that alternate starting with a (possibly empty) run of zeros.
//! PBM is the ASCII `P1` variant: magic line, `width height` line, then one
//! text row per mask row with `0`/`1` separated by single spaces.

use super::Mask;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RleMask {
    height: usize,
    width: usize,
    runs: Vec<usize>,
}

impl RleMask {
    pub fn new(height: usize, width: usize, runs: Vec<usize>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::InvalidRle(format!(
                "dimensions must be at least 1x1, got {height}x{width}"
            )));
        }
        if runs.is_empty() {
            return Err(Error::InvalidRle("no runs".into()));
        }
        if let Some(pos) = runs.iter().skip(1).position(|&r| r == 0) {
            return Err(Error::InvalidRle(format!(
                "run {} is zero; only the first run may be empty",
                pos + 2
            )));
        }
        let total: usize = runs.iter().sum();
        if total != height * width {
            return Err(Error::InvalidRle(format!(
                "runs sum to {total}, expected {}",
                height * width
            )));
        }
        Ok(Self {
            height,
            width,
            runs,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn runs(&self) -> &[usize] {
        &self.runs
    }

    /// Single text line without a trailing newline.
    pub fn to_line(&self) -> String {
        let mut out = format!("RLE {} {}", self.height, self.width);
        for r in &self.runs {
            out.push(' ');
            out.push_str(&r.to_string());
        }
        out
    }

    pub fn parse_line(line: &str) -> Result<Self> {
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("RLE") => {}
            other => {
                return Err(Error::InvalidRle(format!(
                    "expected `RLE` tag, found {other:?}"
                )))
            }
        }
        let mut numbers = tokens.map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::InvalidRle(format!("`{t}` is not a non-negative integer")))
        });
        let height = numbers
            .next()
            .ok_or_else(|| Error::InvalidRle("missing height".into()))??;
        let width = numbers
            .next()
            .ok_or_else(|| Error::InvalidRle("missing width".into()))??;
        let runs = numbers.collect::<Result<Vec<_>>>()?;
        Self::new(height, width, runs)
    }
}

pub fn rle_encode(m: &Mask) -> RleMask {
    let mut runs = Vec::new();
    let mut current = false;
    let mut run = 0usize;
    for &bit in m.bits() {
        if bit == current {
            run += 1;
        } else {
            runs.push(run);
            current = bit;
            run = 1;
        }
    }
    runs.push(run);
    RleMask {
        height: m.height(),
        width: m.width(),
        runs,
    }
}

pub fn rle_decode(r: &RleMask) -> Result<Mask> {
    let mut bits = Vec::with_capacity(r.height * r.width);
    let mut value = false;
    for &run in &r.runs {
        bits.extend(std::iter::repeat_n(value, run));
        value = !value;
    }
    Mask::from_bits(r.height, r.width, bits)
}

pub fn write_pbm(m: &Mask) -> String {
    let mut out = String::with_capacity(m.height() * (2 * m.width() + 1) + 16);
    out.push_str("P1\n");
    out.push_str(&format!("{} {}\n", m.width(), m.height()));
    for row in m.bits().chunks(m.width()) {
        for (i, &b) in row.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push(if b { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

/// Reads ASCII PBM. Accepts `#` comments and pixel digits with or without
/// separating whitespace.
pub fn read_pbm(text: &str) -> Result<Mask> {
    let body: String = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");
    let mut chars = body.char_indices().peekable();
    let mut token = |what: &str| -> Result<String> {
        while chars.peek().is_some_and(|(_, c)| c.is_ascii_whitespace()) {
            chars.next();
        }
        let mut tok = String::new();
        while let Some(&(_, c)) = chars.peek() {
            if c.is_ascii_whitespace() {
                break;
            }
            tok.push(c);
            chars.next();
        }
        if tok.is_empty() {
            Err(Error::InvalidPbm(format!("missing {what}")))
        } else {
            Ok(tok)
        }
    };
    let magic = token("magic number")?;
    if magic != "P1" {
        return Err(Error::InvalidPbm(format!(
            "expected magic `P1`, found `{magic}`"
        )));
    }
    let dim = |s: String, what: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::InvalidPbm(format!("bad {what} `{s}`")))
    };
    let width = dim(token("width")?, "width")?;
    let height = dim(token("height")?, "height")?;

    let mut bits = Vec::with_capacity(width * height);
    for (_, c) in chars {
        match c {
            '0' => bits.push(false),
            '1' => bits.push(true),
            c if c.is_ascii_whitespace() => {}
            other => return Err(Error::InvalidPbm(format!("unexpected character `{other}`"))),
        }
    }
    if bits.len() != width * height {
        return Err(Error::InvalidPbm(format!(
            "expected {} pixels, found {}",
            width * height,
            bits.len()
        )));
    }
    Mask::from_bits(height, width, bits)
}
