//! Exact evaluation of upper and lower bounds on `u(n)`, the Kalmar
//! comparison sequence and the tanglegram counting bound.
//!
//! Everything is generic over the integer type so tables can be produced in
//! `u64` or, for large arguments, in [`num_bigint::BigUint`].

use std::fmt::{self, Display, Write as _};

use num_integer::Integer;
use num_traits::pow;
use serde::Serialize;

use crate::embedding::jellyfish_mast;
use crate::error::{Error, Result};
use crate::shape::JellyfishSpec;

/// Integer types usable in bound tables and coefficient sequences.
pub trait BoundInt: Integer + Clone + From<u64> + Display + Send + Sync {}

impl<T: Integer + Clone + From<u64> + Display + Send + Sync> BoundInt for T {}

fn int<T: BoundInt>(v: usize) -> T {
    T::from(v as u64)
}

/// Known minimum sizes `u(1..=11)` of n-universal binary trees.
pub const KNOWN_U: [u64; 11] = [1, 2, 3, 5, 6, 9, 10, 14, 16, 19, 21];

/// Best known upper bound on `u(12)`.
pub const U12_UPPER: u64 = 28;

pub fn known_u(n: usize) -> Option<u64> {
    n.checked_sub(1).and_then(|i| KNOWN_U.get(i)).copied()
}

/// `u(n) <= u(n-1) + u(floor(n/2))` unrolled from `u(1) = 1`.
pub fn naive_upper<T: BoundInt>(n: usize) -> Result<T> {
    Ok(naive_upper_table::<T>(n)?.pop().expect("nonempty"))
}

/// Values of [`naive_upper`] for `1..=n`.
pub fn naive_upper_table<T: BoundInt>(n: usize) -> Result<Vec<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut v: Vec<T> = vec![T::one()];
    for m in 2..=n {
        let next = v[m - 2].clone() + v[m / 2 - 1].clone();
        v.push(next);
    }
    Ok(v)
}

/// `floor((2n^2 + 1) / 3)`.
pub fn quad_upper<T: BoundInt>(n: usize) -> T {
    let n: T = int(n);
    (int::<T>(2) * n.clone() * n + T::one()) / int(3)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChungBound<T> {
    pub k: usize,
    /// Sum of `mast(T_i, T_j)` over pairs of the jellyfish family.
    pub mast_sum: T,
    /// `ceil((2k 2^k - mast_sum) / 3)`.
    pub value: T,
    /// `ceil(k 2^k / 3)`.
    pub simplified: T,
}

/// Lower bound on `u(2^k)` from inclusion-exclusion over the jellyfish
/// family `T_i = J_{i-1, 2^(k-i+1)}`, `1 <= i <= k`.
pub fn chung_lower<T: BoundInt>(k: usize) -> Result<ChungBound<T>> {
    if !(2..=40).contains(&k) {
        return Err(Error::InvalidParameter(format!("chung bound needs 2 <= k <= 40, got {k}")));
    }
    let spec = |i: usize| JellyfishSpec { h: i - 1, ell: 1 << (k - i + 1) };
    let mut mast_sum = T::zero();
    for i in 1..=k {
        for j in i + 1..=k {
            mast_sum = mast_sum + T::from(jellyfish_mast(spec(i), spec(j))?);
        }
    }
    let k_2k: T = int::<T>(k) * pow(int::<T>(2), k);
    let three: T = int(3);
    let value = (int::<T>(2) * k_2k.clone() - mast_sum.clone()).div_ceil(&three);
    let simplified = k_2k.div_ceil(&three);
    debug_assert!(value >= simplified);
    Ok(ChungBound { k, mast_sum, value, simplified })
}

/// Number of ordered factorizations of `1..=n`.
pub fn ordered_factorizations<T: BoundInt>(n: usize) -> Vec<T> {
    let mut h: Vec<T> = vec![T::zero(); n + 1];
    if n >= 1 {
        h[1] = T::one();
    }
    for d in 1..=n {
        let hd = h[d].clone();
        for m in (2 * d..=n).step_by(d) {
            h[m] = h[m].clone() + hd.clone();
        }
    }
    h.remove(0);
    h
}

/// Partial sums of ordered factorization counts.
pub fn kalmar<T: BoundInt>(n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    Ok(ordered_factorizations::<T>(n).into_iter().fold(T::zero(), |a, b| a + b))
}

/// Smallest `q` with `binom(q, n) >= t_n`.
pub fn tangle_lower<T: BoundInt>(n: usize, t_n: &T) -> Result<T> {
    if *t_n < T::one() {
        return Err(Error::InvalidParameter("tanglegram count must be positive".into()));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    // binom(q, n) for q = n, n+1, ...
    let mut q = n;
    let mut b = T::one();
    while b < *t_n {
        q += 1;
        b = b * int(q) / int(q - n);
    }
    Ok(int(q))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundRow<T> {
    pub n: usize,
    pub u_known: Option<u64>,
    pub naive_upper: T,
    pub quad_upper: T,
    /// `chung_lower(floor(log2 n))`, valid because `u` is increasing.
    pub chung_lower: Option<T>,
    pub kalmar: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tangle_lower: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundTable<T> {
    pub rows: Vec<BoundRow<T>>,
}

impl<T: BoundInt> BoundTable<T> {
    /// Rows for `from..=to`.
    pub fn new(from: usize, to: usize) -> Result<Self> {
        if from == 0 || from > to {
            return Err(Error::InvalidParameter(format!("bad range {from}..={to}")));
        }
        let naive = naive_upper_table::<T>(to)?;
        let fact = ordered_factorizations::<T>(to);
        let mut partial = T::zero();
        let mut rows = Vec::with_capacity(to - from + 1);
        for n in 1..=to {
            partial = partial + fact[n - 1].clone();
            if n < from {
                continue;
            }
            let k = n.ilog2() as usize;
            let chung = if k >= 2 { Some(chung_lower::<T>(k)?.value) } else { None };
            rows.push(BoundRow {
                n,
                u_known: known_u(n),
                naive_upper: naive[n - 1].clone(),
                quad_upper: quad_upper(n),
                chung_lower: chung,
                kalmar: partial.clone(),
                tangle_lower: None,
            });
        }
        Ok(BoundTable { rows })
    }

    /// Fills `tangle_lower` from tanglegram counts `t_1, t_2, ...`.
    pub fn with_tanglegram_counts(mut self, counts: &[T]) -> Result<Self> {
        for row in &mut self.rows {
            if let Some(t) = counts.get(row.n - 1) {
                row.tangle_lower = Some(tangle_lower(row.n, t)?);
            }
        }
        Ok(self)
    }

    fn cells(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        let opt = |v: &Option<T>| v.as_ref().map_or("-".to_owned(), T::to_string);
        let header = vec!["n", "u_known", "naive_upper", "quad_upper", "chung_lower", "kalmar"];
        let body = self
            .rows
            .iter()
            .map(|r| {
                let u = match (r.u_known, r.n) {
                    (Some(u), _) => u.to_string(),
                    (None, 12) => format!("<={U12_UPPER}"),
                    _ => "-".to_owned(),
                };
                vec![
                    r.n.to_string(),
                    u,
                    r.naive_upper.to_string(),
                    r.quad_upper.to_string(),
                    opt(&r.chung_lower),
                    r.kalmar.to_string(),
                ]
            })
            .collect();
        (header, body)
    }

    /// Same table with every value rendered in decimal, for exact JSON output.
    pub fn to_decimal(&self) -> BoundTable<String> {
        let rows = self
            .rows
            .iter()
            .map(|r| BoundRow {
                n: r.n,
                u_known: r.u_known,
                naive_upper: r.naive_upper.to_string(),
                quad_upper: r.quad_upper.to_string(),
                chung_lower: r.chung_lower.as_ref().map(T::to_string),
                kalmar: r.kalmar.to_string(),
                tangle_lower: r.tangle_lower.as_ref().map(T::to_string),
            })
            .collect();
        BoundTable { rows }
    }

    pub fn to_csv(&self) -> String {
        let (header, body) = self.cells();
        let mut out = header.join(",");
        out.push('\n');
        for row in body {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Right-aligned columns.
    pub fn to_text(&self) -> String {
        let (header, body) = self.cells();
        let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
        for row in &body {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        let line = |cells: Vec<&str>, out: &mut String| {
            let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(header.clone(), &mut out);
        for row in &body {
            line(row.iter().map(String::as_str).collect(), &mut out);
        }
        out
    }
}

impl<T: BoundInt> fmt::Display for BoundTable<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
