use serde::{Deserialize, Serialize};

use super::Shape;
use crate::error::{Error, Result};

/// Caterpillar with `n` leaves: `C_1` is a leaf and `C_n = C_1 (+) C_{n-1}`.
pub fn caterpillar(n: usize) -> Result<Shape> {
    if n == 0 {
        return Err(Error::InvalidParameter("caterpillar needs n >= 1".into()));
    }
    let mut t = Shape::white();
    for _ in 1..n {
        t = Shape::internal(vec![Shape::white(), t], 2)?;
    }
    Ok(t)
}

/// Complete binary tree of height `h` (`2^h` leaves).
pub fn complete(h: usize) -> Shape {
    let mut t = Shape::white();
    for _ in 0..h {
        t = Shape::from_sorted(vec![t.clone(), t], 2);
    }
    t
}

/// Parameters of the jellyfish `J_{h,ell}`: a complete tree of height `h`
/// with a caterpillar `C_ell` hanging from every leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JellyfishSpec {
    pub h: usize,
    pub ell: usize,
}

impl JellyfishSpec {
    pub fn new(h: usize, ell: usize) -> Result<Self> {
        let spec = JellyfishSpec { h, ell };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ell < 2 {
            return Err(Error::InvalidParameter(format!("jellyfish needs ell >= 2, got {}", self.ell)));
        }
        Ok(())
    }

    pub fn white_leaves(&self) -> usize {
        (1usize << self.h) * self.ell
    }

    pub fn height(&self) -> usize {
        self.h + self.ell - 1
    }
}

pub fn jellyfish(spec: JellyfishSpec) -> Result<Shape> {
    spec.validate()?;
    let mut t = caterpillar(spec.ell)?;
    for _ in 0..spec.h {
        t = Shape::from_sorted(vec![t.clone(), t], 2);
    }
    Ok(t)
}
