//! Tanglegrams: two equal-size white shapes and a perfect matching between
//! their leaves.
//!
//! Leaves are addressed by canonical position (see [`Shape::leaf_colors`]).
//! The matching is a permutation `perm` with `perm[i]` the right position
//! matched to left position `i`.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shape::{parse_newick_labeled, Enumerator, Shape};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tanglegram {
    left: Shape,
    right: Shape,
    perm: Vec<usize>,
}

/// `code(left)|code(right)|p0 p1 ...` with the permutation minimized
/// lexicographically over both trees' automorphism groups. Equal codes
/// mean isomorphic tanglegrams. Left and right are not interchangeable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TanglegramCode {
    left: String,
    right: String,
    perm: Vec<usize>,
}

impl TanglegramCode {
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }
}

impl fmt::Display for TanglegramCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}|{}", self.left, self.right, self.perm.iter().join(" "))
    }
}

impl Tanglegram {
    pub fn new(left: Shape, right: Shape, perm: Vec<usize>) -> Result<Self> {
        if left.has_red() || right.has_red() {
            return Err(Error::Unsupported("white-only shapes in tanglegrams"));
        }
        if left.arity() != right.arity() {
            return Err(Error::ArityMismatch(left.arity(), right.arity()));
        }
        let n = left.white_leaves();
        if right.white_leaves() != n || perm.len() != n {
            return Err(Error::InvalidParameter(format!(
                "sizes differ: left {}, right {}, matching {}",
                n,
                right.white_leaves(),
                perm.len()
            )));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter("matching is not a permutation".into()));
            }
        }
        Ok(Tanglegram { left, right, perm })
    }

    pub fn left(&self) -> &Shape {
        &self.left
    }

    pub fn right(&self) -> &Shape {
        &self.right
    }

    pub fn matching(&self) -> &[usize] {
        &self.perm
    }

    pub fn size(&self) -> usize {
        self.perm.len()
    }

    pub fn arity(&self) -> usize {
        self.left.arity()
    }

    pub fn canonical_code(&self) -> TanglegramCode {
        let mut best: Option<Vec<usize>> = None;
        let mut rho = vec![0; self.size()];
        for beta in automorphisms(&self.right) {
            for (r, &p) in rho.iter_mut().zip(&self.perm) {
                *r = beta[p];
            }
            let seq = min_left(&self.left, &rho);
            if best.as_ref().is_none_or(|b| seq < *b) {
                best = Some(seq);
            }
        }
        TanglegramCode {
            left: self.left.code().to_owned(),
            right: self.right.code().to_owned(),
            perm: best.expect("identity automorphism"),
        }
    }

    /// The canonical representative of this tanglegram's class.
    pub fn canonical(&self) -> Tanglegram {
        let code = self.canonical_code();
        Tanglegram { left: self.left.clone(), right: self.right.clone(), perm: code.perm }
    }

    /// Subtanglegram induced by the matching edges at the given left positions.
    pub fn induced(&self, edges: &[usize]) -> Result<Tanglegram> {
        let Some((left, lmap)) = self.left.induced_subtree(edges)? else {
            return Err(Error::InvalidParameter("empty edge set".into()));
        };
        let rights: Vec<usize> = edges.iter().map(|&e| self.perm[e]).collect();
        let (right, rmap) = self.right.induced_subtree(&rights)?.expect("nonempty");
        let mut rpos = vec![usize::MAX; self.size()];
        for (b, &orig) in rmap.iter().enumerate() {
            rpos[orig] = b;
        }
        let perm = lmap.iter().map(|&x| rpos[self.perm[x]]).collect();
        Tanglegram::new(left, right, perm)
    }

    /// Text form `<newick-left>|<newick-right>|<perm>`.
    pub fn to_text(&self) -> String {
        format!("{}|{}|{}", self.left.to_newick(), self.right.to_newick(), self.perm.iter().join(" "))
    }

    /// Parses [`Tanglegram::to_text`] output. The permutation refers to
    /// leaves in textual order, so hand-written Newick need not be canonical.
    pub fn parse_text(text: &str, arity: usize) -> Result<Tanglegram> {
        let fields: Vec<&str> = text.trim().split('|').collect();
        let [l, r, p] = fields[..] else {
            return Err(Error::Parse { pos: 0, msg: "expected three '|'-separated fields".into() });
        };
        let (left, lmap) = parse_newick_labeled(l, arity)?;
        let (right, rmap) = parse_newick_labeled(r, arity)?;
        let textual: Vec<usize> = p
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse { pos: l.len() + r.len() + 2, msg: e.to_string() })?;
        let n = lmap.len();
        if textual.len() != n || rmap.len() != n || textual.iter().any(|&t| t >= n) {
            return Err(Error::InvalidParameter("matching does not fit the trees".into()));
        }
        let mut rpos = vec![0; n];
        for (b, &t) in rmap.iter().enumerate() {
            rpos[t] = b;
        }
        let perm = lmap.iter().map(|&t| rpos[textual[t]]).collect();
        Tanglegram::new(left, right, perm)
    }

    /// Graphviz drawing with the trees facing each other and dashed
    /// matching edges.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph {name} {{");
        out.push_str("  rankdir=LR;\n  node [label=\"\", shape=circle, width=0.15];\n");
        let mut next = 0;
        let mut body = String::new();
        self.left.write_dot(&mut body, "l", &mut next, true);
        let mut rnext = 0;
        let mut rbody = String::new();
        self.right.write_dot(&mut rbody, "r", &mut rnext, true);
        out.push_str(&body);
        // right tree edges drawn towards the leaves on the left
        out.push_str(&rbody.replace("[arrowhead=none]", "[arrowhead=none, dir=back]"));
        let lleaves = leaf_ids(&self.left);
        let rleaves = leaf_ids(&self.right);
        for (i, &p) in self.perm.iter().enumerate() {
            let _ = writeln!(out, "  l{} -> r{} [style=dashed, arrowhead=none, constraint=false];", lleaves[i], rleaves[p]);
        }
        out.push_str("}\n");
        out
    }
}

/// DOT vertex ids of the leaves, matching the numbering of `write_dot`.
fn leaf_ids(s: &Shape) -> Vec<usize> {
    fn walk(s: &Shape, next: &mut usize, out: &mut Vec<usize>) {
        let id = *next;
        *next += 1;
        if s.is_leaf() {
            out.push(id);
        }
        for c in s.children() {
            walk(c, next, out);
        }
    }
    let mut out = Vec::new();
    walk(s, &mut 0, &mut out);
    out
}

impl fmt::Display for Tanglegram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// All automorphisms of `s` as maps on canonical leaf positions.
pub fn automorphisms(s: &Shape) -> Vec<Vec<usize>> {
    if s.is_leaf() {
        return vec![vec![0]];
    }
    let children = s.children();
    let mut offsets = Vec::with_capacity(children.len());
    let mut off = 0;
    for c in children {
        offsets.push(off);
        off += c.leaf_count();
    }
    let groups: Vec<Vec<Vec<usize>>> = children.iter().map(automorphisms).collect();
    // block permutations: children with equal codes may be exchanged
    let blocks: Vec<Vec<usize>> = (0..children.len())
        .chunk_by(|&i| children[i].code())
        .into_iter()
        .map(|(_, g)| g.collect())
        .collect();
    let block_perms: Vec<Vec<Vec<usize>>> = blocks
        .iter()
        .map(|b| b.iter().copied().permutations(b.len()).collect())
        .collect();
    let mut out = Vec::new();
    for choice in block_perms.iter().multi_cartesian_product() {
        // target[i] = slot child i moves to
        let mut target = vec![0; children.len()];
        for (b, p) in blocks.iter().zip(choice) {
            for (&from, &to) in b.iter().zip(p) {
                target[from] = to;
            }
        }
        for inner in groups.iter().multi_cartesian_product() {
            let mut a = vec![0; off];
            for (i, g) in inner.iter().enumerate() {
                for (x, &y) in g.iter().enumerate() {
                    a[offsets[i] + x] = offsets[target[i]] + y;
                }
            }
            out.push(a);
        }
    }
    out
}

/// Lexicographically least rearrangement of `rho` (values on the leaves of
/// `s`, in canonical order) reachable by automorphisms of `s`.
fn min_left(s: &Shape, rho: &[usize]) -> Vec<usize> {
    if s.is_leaf() {
        return rho.to_vec();
    }
    let mut parts: Vec<(&str, Vec<usize>)> = Vec::with_capacity(s.children().len());
    let mut off = 0;
    for c in s.children() {
        let n = c.leaf_count();
        parts.push((c.code(), min_left(c, &rho[off..off + n])));
        off += n;
    }
    // equal codes are adjacent, so sorting by (code, sequence) only reorders
    // within blocks of exchangeable children
    parts.sort();
    parts.into_iter().flat_map(|(_, p)| p).collect()
}

/// One canonical representative per isomorphism class of size-`n`
/// tanglegrams of arity `arity`, sorted by code.
pub fn enumerate_tanglegrams(n: usize, arity: usize) -> Result<Vec<Tanglegram>> {
    if n == 0 {
        return Err(Error::InvalidParameter("tanglegram size must be at least 1".into()));
    }
    let shapes = Enumerator::new(arity)?.white(n).to_vec();
    let pairs: Vec<(&Shape, &Shape)> = shapes.iter().cartesian_product(shapes.iter()).collect();
    let codes: BTreeSet<TanglegramCode> = pairs
        .par_iter()
        .map(|(l, r)| {
            (0..n)
                .permutations(n)
                .map(|p| Tanglegram { left: (*l).clone(), right: (*r).clone(), perm: p }.canonical_code())
                .collect::<BTreeSet<_>>()
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    Ok(codes
        .into_iter()
        .map(|c| {
            let l = shapes.iter().find(|s| s.code() == c.left).expect("listed").clone();
            let r = shapes.iter().find(|s| s.code() == c.right).expect("listed").clone();
            Tanglegram { left: l, right: r, perm: c.perm }
        })
        .collect())
}

/// Codes of all size-`k` subtanglegrams of `big`.
pub fn induced_codes(big: &Tanglegram, k: usize) -> BTreeSet<TanglegramCode> {
    if k == 0 || k > big.size() {
        return BTreeSet::new();
    }
    (0..big.size())
        .combinations(k)
        .map(|e| big.induced(&e).expect("valid subset").canonical_code())
        .collect()
}

pub fn is_induced_subtanglegram(small: &Tanglegram, big: &Tanglegram) -> Result<bool> {
    if small.arity() != big.arity() {
        return Err(Error::ArityMismatch(small.arity(), big.arity()));
    }
    if small.size() > big.size() {
        return Ok(false);
    }
    let target = small.canonical_code();
    Ok((0..big.size())
        .combinations(small.size())
        .any(|e| big.induced(&e).expect("valid subset").canonical_code() == target))
}

/// Whether every size-`n` tanglegram of `t`'s arity is induced in `t`.
pub fn is_universal_tanglegram(t: &Tanglegram, n: usize) -> Result<bool> {
    let all = enumerate_tanglegrams(n, t.arity())?;
    let found = induced_codes(t, n);
    Ok(all.iter().all(|c| found.contains(&c.canonical_code())))
}
