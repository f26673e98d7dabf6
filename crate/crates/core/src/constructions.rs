//! Recursive universal shapes, the redleaf comb and universal tanglegrams.
//!
//! `U(n) = U1(n/2)[join(d x U(n/2))]` and
//! `U1(n) = U1(n/2)[join(U1(n/2), U(n), (d-2) x U(n/2))]`, all halves
//! rounded down, with `U(1)` a white leaf and `U1(1)` a white-red cherry.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::bounds::BoundInt;
use crate::error::{Error, Result};
use crate::search::is_universal;
use crate::shape::{caterpillar, check_arity, Color, Plane, Shape};
use crate::tanglegram::Tanglegram;

/// `A_1 = 1, B_1 = d, A_{k+1} = 3A_k + B_k, B_{k+1} = (2d-2)A_k + dB_k`,
/// `C_k = 2A_k + B_k`. For `d = 2` these are the binary `(a_k, b_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoeffSequences<T> {
    pub d: usize,
    a: Vec<T>,
    b: Vec<T>,
}

impl<T: BoundInt> CoeffSequences<T> {
    /// Terms `1..=k_max`.
    pub fn new(d: usize, k_max: usize) -> Result<Self> {
        check_arity(d)?;
        let dd = T::from(d as u64);
        let mut a = vec![T::one()];
        let mut b = vec![dd.clone()];
        for k in 1..k_max {
            let (ak, bk) = (a[k - 1].clone(), b[k - 1].clone());
            a.push(T::from(3) * ak.clone() + bk.clone());
            b.push(T::from(2 * d as u64 - 2) * ak + dd.clone() * bk);
        }
        a.truncate(k_max);
        b.truncate(k_max);
        Ok(CoeffSequences { d, a, b })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn a(&self, k: usize) -> &T {
        &self.a[k - 1]
    }

    pub fn b(&self, k: usize) -> &T {
        &self.b[k - 1]
    }

    pub fn c(&self, k: usize) -> T {
        T::from(2) * self.a(k).clone() + self.b(k).clone()
    }
}

/// `s_0 = (1)`, `s_k = s_{k-1} ++ (2^k) ++ s_{k-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SVec {
    pub k: usize,
    pub terms: Vec<u64>,
}

impl SVec {
    /// `s_{i,k}` with `i` 1-based.
    pub fn s(&self, i: usize) -> u64 {
        self.terms[i - 1]
    }
}

pub fn svec(k: usize) -> Result<SVec> {
    if k > 40 {
        return Err(Error::InvalidParameter(format!("svec is limited to k <= 40, got {k}")));
    }
    let mut terms = vec![1u64];
    for j in 1..=k {
        let mut next = terms.clone();
        next.push(1 << j);
        next.extend_from_slice(&terms);
        terms = next;
    }
    Ok(SVec { k, terms })
}

/// Strictly increasing 1-based indices `a_i` with `b_i <= s_{a_i,k}` for a
/// composition `b` of `2^k`. The term whose prefix sum first exceeds
/// `2^(k-1)` goes to the middle entry `2^k`; the terms before and after
/// are padded with one extra term up to `2^(k-1)` and placed recursively
/// in the left and right copies of `s_{k-1}`.
pub fn embed_composition(b: &[u64], k: usize) -> Result<Vec<usize>> {
    if k > 40 {
        return Err(Error::InvalidParameter(format!("composition embedding is limited to k <= 40, got {k}")));
    }
    if b.contains(&0) || b.iter().sum::<u64>() != 1 << k {
        return Err(Error::InvalidParameter(format!("not a composition of 2^{k}")));
    }
    let mut out = Vec::with_capacity(b.len());
    place(b, k, 0, &mut out);
    Ok(out)
}

fn place(b: &[u64], k: usize, offset: usize, out: &mut Vec<usize>) {
    if k == 0 {
        out.push(offset + 1);
        return;
    }
    let half = 1u64 << (k - 1);
    let mut sum = 0;
    let pivot = b
        .iter()
        .position(|&x| {
            sum += x;
            sum > half
        })
        .expect("total exceeds half");
    let padded = |part: &[u64], offset: usize, out: &mut Vec<usize>| {
        if part.is_empty() {
            return;
        }
        let mut p = part.to_vec();
        let rest = half - p.iter().sum::<u64>();
        if rest > 0 {
            p.push(rest);
        }
        let mut idx = Vec::with_capacity(p.len());
        place(&p, k - 1, offset, &mut idx);
        out.extend_from_slice(&idx[..part.len()]);
    };
    padded(&b[..pivot], offset, out);
    out.push(offset + (1 << k));
    padded(&b[pivot + 1..], offset + (1 << k), out);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Leaf,
    RedleafBase,
    Injected,
    Split,
    RedleafSplit,
}

#[derive(Debug, Clone)]
struct Entry {
    shape: Shape,
    rule: Rule,
    parts: Vec<(usize, bool)>,
}

/// One node of a construction trace. `parts` lists the ids of the stump
/// first, then the joined parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub id: usize,
    pub n: usize,
    pub d: usize,
    pub redleaf: bool,
    pub rule: Rule,
    pub parts: Vec<usize>,
    pub white_leaves: usize,
}

/// Memoized builder for one arity. Shapes may be injected (after a
/// universality check) to replace recursive parts by smaller ones.
pub struct UniversalBuilder {
    d: usize,
    memo: RwLock<HashMap<(usize, bool), Entry>>,
}

impl UniversalBuilder {
    pub fn new(d: usize) -> Result<Self> {
        check_arity(d)?;
        Ok(UniversalBuilder { d, memo: RwLock::new(HashMap::new()) })
    }

    pub fn arity(&self) -> usize {
        self.d
    }

    /// Uses `shape` for `U(n)` (or `U1(n)`) from now on.
    pub fn inject(&self, n: usize, redleaf: bool, shape: Shape) -> Result<()> {
        if shape.arity() != self.d {
            return Err(Error::ArityMismatch(self.d, shape.arity()));
        }
        if shape.has_red() != redleaf || !is_universal(&shape, n, redleaf)? {
            return Err(Error::InvalidParameter(format!("{shape} is not {n}-universal")));
        }
        self.memo.write().expect("memo lock").insert((n, redleaf), Entry { shape, rule: Rule::Injected, parts: vec![] });
        Ok(())
    }

    pub fn universal(&self, n: usize) -> Result<Shape> {
        self.get(n, false)
    }

    pub fn redleaf(&self, n: usize) -> Result<Shape> {
        self.get(n, true)
    }

    fn get(&self, n: usize, redleaf: bool) -> Result<Shape> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if let Some(e) = self.memo.read().expect("memo lock").get(&(n, redleaf)) {
            return Ok(e.shape.clone());
        }
        let entry = self.construct(n, redleaf)?;
        let mut memo = self.memo.write().expect("memo lock");
        Ok(memo.entry((n, redleaf)).or_insert(entry).shape.clone())
    }

    fn construct(&self, n: usize, redleaf: bool) -> Result<Entry> {
        let d = self.d;
        let white = Shape::leaf_with_arity(Color::White, d)?;
        if n == 1 {
            return Ok(if redleaf {
                let red = Shape::leaf_with_arity(Color::Red, d)?;
                Entry { shape: Shape::join([white, red])?, rule: Rule::RedleafBase, parts: vec![] }
            } else {
                Entry { shape: white, rule: Rule::Leaf, parts: vec![] }
            });
        }
        let h = n / 2;
        let stump = self.redleaf(h)?;
        let mut keys = vec![(h, true)];
        if redleaf {
            keys.extend([(h, true), (n, false)]);
            keys.extend(std::iter::repeat_n((h, false), d - 2));
        } else {
            keys.extend(std::iter::repeat_n((h, false), d));
        }
        let parts = keys[1..].iter().map(|&(m, r)| self.get(m, r)).collect::<Result<Vec<_>>>()?;
        let shape = stump.graft(&Shape::join(parts)?)?;
        let rule = if redleaf { Rule::RedleafSplit } else { Rule::Split };
        Ok(Entry { shape, rule, parts: keys })
    }

    /// Flat construction trace for `U(n)` or `U1(n)`, children before parents.
    pub fn trace(&self, n: usize, redleaf: bool) -> Result<Vec<TraceEntry>> {
        self.get(n, redleaf)?;
        let memo = self.memo.read().expect("memo lock");
        let mut ids = HashMap::new();
        let mut out = Vec::new();
        self.trace_rec(&memo, (n, redleaf), &mut ids, &mut out);
        Ok(out)
    }

    fn trace_rec(
        &self,
        memo: &HashMap<(usize, bool), Entry>,
        key: (usize, bool),
        ids: &mut HashMap<(usize, bool), usize>,
        out: &mut Vec<TraceEntry>,
    ) -> usize {
        if let Some(&id) = ids.get(&key) {
            return id;
        }
        let e = &memo[&key];
        let parts = e.parts.iter().map(|&k| self.trace_rec(memo, k, ids, out)).collect();
        let id = out.len();
        out.push(TraceEntry {
            id,
            n: key.0,
            d: self.d,
            redleaf: key.1,
            rule: e.rule,
            parts,
            white_leaves: e.shape.white_leaves(),
        });
        ids.insert(key, id);
        id
    }
}

pub fn build_universal(n: usize, d: usize) -> Result<Shape> {
    UniversalBuilder::new(d)?.universal(n)
}

pub fn build_universal_redleaf(n: usize, d: usize) -> Result<Shape> {
    UniversalBuilder::new(d)?.redleaf(n)
}

/// `R_1 (+) (R_2 (+) (... (R_L (+) Q)))` with `L = 2^(k+1) - 1`, `Q` the
/// red leaf and `R_i` the join of `d - 1` copies of `U(s_{i,k})` (a single
/// copy when `d = 2`). Universal parts come from `builder`.
pub fn build_redleaf_comb(k: usize, builder: &UniversalBuilder) -> Result<Shape> {
    let d = builder.arity();
    let s = svec(k)?;
    let mut acc = Shape::leaf_with_arity(Color::Red, d)?;
    for &si in s.terms.iter().rev() {
        let u = builder.universal(si as usize)?;
        let r = if d == 2 { u } else { Shape::join(std::iter::repeat_n(u, d - 1))? };
        acc = Shape::join([r, acc])?;
    }
    Ok(acc)
}

fn plane_of<L>(s: &Shape, next: &mut usize, label: &mut dyn FnMut(usize, Color) -> Plane<L>) -> Plane<L> {
    match s.color() {
        Some(c) => {
            let i = *next;
            *next += 1;
            label(i, c)
        }
        None => Plane::Node(s.children().iter().map(|c| plane_of(c, next, label)).collect()),
    }
}

/// Both trees are `U` with a caterpillar `C_u` (`u = |U|`) hung from every
/// leaf. Leaf `j` of the small tree at left leaf `i` is matched to leaf `i`
/// of the small tree at right leaf `j`, so every left small tree sends one
/// edge into each right small tree. The size is `u^2`.
pub fn build_universal_tanglegram(u: &Shape) -> Result<Tanglegram> {
    if u.has_red() {
        return Err(Error::Unsupported("a white universal shape"));
    }
    let size = u.white_leaves();
    let small = caterpillar(size)?.with_arity(u.arity())?;
    let plane = plane_of(u, &mut 0, &mut |i, _| {
        plane_of(&small, &mut 0, &mut |j, c| Plane::Leaf(c, (i, j)))
    });
    let (tree, labels) = plane.canonicalize(u.arity())?;
    let mut pos = vec![0; size * size];
    for (p, &(i, j)) in labels.iter().enumerate() {
        pos[i * size + j] = p;
    }
    let perm = labels.iter().map(|&(i, j)| pos[j * size + i]).collect();
    Tanglegram::new(tree.clone(), tree, perm)
}
