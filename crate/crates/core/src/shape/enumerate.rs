//! Isomorph-free generation of shapes by leaf count.
//!
//! Shapes with `n` white leaves are generated as joins of multisets of
//! smaller canonical shapes, so every isomorphism class is produced exactly
//! once without a deduplication pass. Redleaf shapes are a red leaf alone,
//! or a join of one redleaf shape with one to `d - 1` white shapes.

use super::{check_arity, Color, Shape};
use crate::error::{Error, Result};

/// Memoizing generator for one arity bound.
pub struct Enumerator {
    arity: usize,
    white: Vec<Vec<Shape>>,
    red: Vec<Vec<Shape>>,
}

impl Enumerator {
    pub fn new(arity: usize) -> Result<Self> {
        check_arity(arity)?;
        Ok(Enumerator { arity, white: vec![Vec::new()], red: Vec::new() })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// All white-only shapes with `n >= 1` leaves, in canonical-code order.
    pub fn white(&mut self, n: usize) -> &[Shape] {
        assert!(n >= 1, "white shapes need n >= 1");
        while self.white.len() <= n {
            let m = self.white.len();
            let next = self.generate_white(m);
            self.white.push(next);
        }
        &self.white[n]
    }

    /// All shapes with exactly one red leaf and `n` white leaves.
    pub fn redleaf(&mut self, n: usize) -> &[Shape] {
        if n > 0 {
            self.white(n);
        }
        while self.red.len() <= n {
            let m = self.red.len();
            let next = self.generate_red(m);
            self.red.push(next);
        }
        &self.red[n]
    }

    pub fn shapes(&mut self, n: usize, redleaf: bool) -> &[Shape] {
        if redleaf {
            self.redleaf(n)
        } else {
            self.white(n)
        }
    }

    fn generate_white(&self, n: usize) -> Vec<Shape> {
        if n == 1 {
            return vec![Shape::leaf_node(Color::White, self.arity)];
        }
        let mut out = Vec::new();
        let mut parts = Vec::new();
        multisets(&self.white, n, n - 1, 2, self.arity, 1, 0, &mut parts, &mut |p| {
            out.push(Shape::internal(p.to_vec(), self.arity).expect("valid join"));
        });
        out.sort();
        out
    }

    fn generate_red(&self, n: usize) -> Vec<Shape> {
        if n == 0 {
            return vec![Shape::leaf_node(Color::Red, self.arity)];
        }
        let mut out = Vec::new();
        for w in 0..n {
            for r in &self.red[w] {
                let mut parts = vec![r.clone()];
                multisets(&self.white, n - w, n - w, 1, self.arity - 1, 1, 0, &mut parts, &mut |p| {
                    out.push(Shape::internal(p.to_vec(), self.arity).expect("valid join"));
                });
            }
        }
        out.sort();
        out
    }
}

/// Visits every multiset of white shapes with leaf counts summing to
/// `remaining`, using between `min_parts` and `max_parts` parts of size at
/// most `max_size`. Parts are chosen in nondecreasing (size, index) order,
/// appended after whatever `current` already holds.
#[allow(clippy::too_many_arguments)]
fn multisets(
    lists: &[Vec<Shape>],
    remaining: usize,
    max_size: usize,
    min_parts: usize,
    max_parts: usize,
    min_size: usize,
    min_idx: usize,
    current: &mut Vec<Shape>,
    emit: &mut dyn FnMut(&[Shape]),
) {
    multisets_rec(lists, remaining, max_size, min_parts, max_parts, 0, min_size, min_idx, current, emit)
}

#[allow(clippy::too_many_arguments)]
fn multisets_rec(
    lists: &[Vec<Shape>],
    remaining: usize,
    max_size: usize,
    min_parts: usize,
    max_parts: usize,
    used: usize,
    min_size: usize,
    min_idx: usize,
    current: &mut Vec<Shape>,
    emit: &mut dyn FnMut(&[Shape]),
) {
    if remaining == 0 {
        if used >= min_parts {
            emit(current);
        }
        return;
    }
    if used == max_parts {
        return;
    }
    for size in min_size..=remaining.min(max_size) {
        let rest = remaining - size;
        if rest != 0 && rest < size {
            continue;
        }
        let start = if size == min_size { min_idx } else { 0 };
        for idx in start..lists[size].len() {
            current.push(lists[size][idx].clone());
            multisets_rec(lists, rest, max_size, min_parts, max_parts, used + 1, size, idx, current, emit);
            current.pop();
        }
    }
}

/// Every shape with `n` white leaves (plus one red leaf when `redleaf`),
/// arity bound `arity`, exactly once per isomorphism class, in
/// canonical-code order.
pub fn enumerate_shapes(n: usize, arity: usize, redleaf: bool) -> Result<std::vec::IntoIter<Shape>> {
    if n == 0 {
        return Err(Error::InvalidParameter("enumeration needs n >= 1".into()));
    }
    let mut e = Enumerator::new(arity)?;
    Ok(e.shapes(n, redleaf).to_vec().into_iter())
}

/// Wedderburn-Etherington numbers via the standard recurrence.
pub fn wedderburn_etherington(n: usize) -> u128 {
    let mut w = vec![0u128; n.max(1) + 1];
    w[1] = 1;
    for m in 2..=n {
        let mut total = 0;
        for i in 1..=(m - 1) / 2 {
            total += w[i] * w[m - i];
        }
        if m % 2 == 0 {
            let h = w[m / 2];
            total += h * (h + 1) / 2;
        }
        w[m] = total;
    }
    w[n]
}
