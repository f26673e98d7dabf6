//! Induced-subtree containment and unlabeled maximum agreement subtrees.
//!
//! Containment is decided by the usual homeomorphic-embedding DP. An
//! [`EmbedTable`] indexes every distinct subtree of a fixed pattern set; for
//! a host vertex `v` the table produces a bit row whose bit `p` is set when
//! pattern subtree `p` embeds in the subtree rooted at `v`. Rows of a parent
//! are computed from the rows of its children only, which lets the search
//! module build rows for whole catalogs of candidate shapes bottom-up.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::shape::{Color, JellyfishSpec, Shape};

/// Memo over (pattern subtree, host subtree) pairs, stored as one bit row
/// per host subtree.
#[derive(Debug, Clone)]
pub struct EmbedTable {
    arity: usize,
    nodes: Vec<PatNode>,
    index: HashMap<Box<str>, usize>,
    words: usize,
    white_leaf: Option<usize>,
    red_leaf: Option<usize>,
}

#[derive(Debug, Clone)]
struct PatNode {
    children: Box<[u32]>,
    white: usize,
}

impl EmbedTable {
    /// Indexes all subtrees of `patterns`. Children always precede parents.
    pub fn new<'a, I>(patterns: I, arity: usize) -> Self
    where
        I: IntoIterator<Item = &'a Shape>,
    {
        let mut t = EmbedTable {
            arity,
            nodes: Vec::new(),
            index: HashMap::new(),
            words: 0,
            white_leaf: None,
            red_leaf: None,
        };
        for p in patterns {
            t.insert(p);
        }
        t.words = t.nodes.len().div_ceil(64).max(1);
        t
    }

    fn insert(&mut self, s: &Shape) -> usize {
        if let Some(&i) = self.index.get(s.code()) {
            return i;
        }
        let children: Box<[u32]> = s.children().iter().map(|c| self.insert(c) as u32).collect();
        let i = self.nodes.len();
        self.nodes.push(PatNode { children, white: s.white_leaves() });
        self.index.insert(s.code().into(), i);
        match s.color() {
            Some(Color::White) => self.white_leaf = Some(i),
            Some(Color::Red) => self.red_leaf = Some(i),
            None => {}
        }
        i
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of distinct pattern subtrees.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Length of a row in 64-bit words.
    pub fn words(&self) -> usize {
        self.words
    }

    pub fn node_of(&self, s: &Shape) -> Option<usize> {
        self.index.get(s.code()).copied()
    }

    /// Row of a host leaf: a white leaf hosts only the white pattern leaf,
    /// the red leaf only the red pattern leaf.
    pub fn leaf_row(&self, color: Color, out: &mut [u64]) {
        out.fill(0);
        let node = match color {
            Color::White => self.white_leaf,
            Color::Red => self.red_leaf,
        };
        if let Some(i) = node {
            set(out, i);
        }
    }

    /// Row of a host vertex from the rows of its children. `white` is the
    /// host vertex's white-leaf count, used to skip hopeless patterns.
    pub fn combine(&self, children: &[&[u64]], white: usize, out: &mut [u64]) {
        out.fill(0);
        for row in children {
            for (o, r) in out.iter_mut().zip(row.iter()) {
                *o |= r;
            }
        }
        let k = children.len();
        for (p, node) in self.nodes.iter().enumerate() {
            let s = node.children.len();
            if s == 0 || s > k || node.white > white || get(out, p) {
                continue;
            }
            let ok = if s == 2 && k == 2 {
                let (a, b) = (node.children[0] as usize, node.children[1] as usize);
                (get(children[0], a) && get(children[1], b)) || (get(children[0], b) && get(children[1], a))
            } else {
                assignable(&node.children, children)
            };
            if ok {
                set(out, p);
            }
        }
    }

    /// Row of the whole host, computed bottom-up.
    pub fn host_row(&self, host: &Shape) -> Vec<u64> {
        let mut out = vec![0; self.words];
        self.fill_row(host, &mut out);
        out
    }

    fn fill_row(&self, host: &Shape, out: &mut [u64]) {
        if let Some(c) = host.color() {
            self.leaf_row(c, out);
            return;
        }
        let rows: Vec<Vec<u64>> = host.children().iter().map(|c| self.host_row(c)).collect();
        let refs: Vec<&[u64]> = rows.iter().map(|r| r.as_slice()).collect();
        self.combine(&refs, host.white_leaves(), out);
    }

    /// Row with bits set for the given pattern shapes (which must be indexed).
    pub fn mask<'a, I>(&self, shapes: I) -> Vec<u64>
    where
        I: IntoIterator<Item = &'a Shape>,
    {
        let mut m = vec![0; self.words];
        for s in shapes {
            set(&mut m, self.node_of(s).expect("pattern indexed"));
        }
        m
    }
}

/// Whether `row` contains every bit of `mask`.
pub fn covers(row: &[u64], mask: &[u64]) -> bool {
    row.iter().zip(mask).all(|(r, m)| r & m == *m)
}

#[inline]
pub(crate) fn get(row: &[u64], i: usize) -> bool {
    row[i >> 6] >> (i & 63) & 1 == 1
}

#[inline]
fn set(row: &mut [u64], i: usize) {
    row[i >> 6] |= 1 << (i & 63);
}

/// Can the pattern children be sent to pairwise distinct host children?
fn assignable(pattern: &[u32], host: &[&[u64]]) -> bool {
    if pattern.len() <= 4 {
        assign_exhaustive(pattern, host, 0)
    } else {
        kuhn(pattern, host)
    }
}

fn assign_exhaustive(pattern: &[u32], host: &[&[u64]], used: u64) -> bool {
    let Some((&p, rest)) = pattern.split_first() else {
        return true;
    };
    (0..host.len()).any(|j| used >> j & 1 == 0 && get(host[j], p as usize) && assign_exhaustive(rest, host, used | 1 << j))
}

fn kuhn(pattern: &[u32], host: &[&[u64]]) -> bool {
    fn augment(i: usize, pattern: &[u32], host: &[&[u64]], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for j in 0..host.len() {
            if seen[j] || !get(host[j], pattern[i] as usize) {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none_or(|o| augment(o, pattern, host, seen, owner)) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; host.len()];
    (0..pattern.len()).all(|i| augment(i, pattern, host, &mut vec![false; host.len()], &mut owner))
}

/// Whether `pattern` is an induced subtree of `host`. The pattern's red
/// leaf must land on the host's red leaf, and white leaves on white leaves.
pub fn is_induced_subtree(pattern: &Shape, host: &Shape) -> Result<bool> {
    if pattern.arity() != host.arity() {
        return Err(Error::ArityMismatch(pattern.arity(), host.arity()));
    }
    if pattern.white_leaves() > host.white_leaves()
        || pattern.height() > host.height()
        || (pattern.has_red() && !host.has_red())
    {
        return Ok(false);
    }
    let table = EmbedTable::new([pattern], pattern.arity());
    let row = table.host_row(host);
    Ok(get(&row, table.node_of(pattern).expect("indexed")))
}

/// Postorder children lists.
fn flatten(s: &Shape, out: &mut Vec<Vec<usize>>) -> usize {
    let kids: Vec<usize> = s.children().iter().map(|c| flatten(c, out)).collect();
    out.push(kids);
    out.len() - 1
}

/// Leaf count of a maximum agreement subtree of two white binary shapes.
pub fn mast(t1: &Shape, t2: &Shape) -> Result<usize> {
    for t in [t1, t2] {
        if t.has_red() || t.max_degree() > 2 {
            return Err(Error::Unsupported("white-only binary shapes"));
        }
    }
    let (mut a, mut b) = (Vec::new(), Vec::new());
    flatten(t1, &mut a);
    flatten(t2, &mut b);
    let nb = b.len();
    let mut m = vec![0usize; a.len() * nb];
    for u in 0..a.len() {
        for v in 0..nb {
            let val = match (a[u].as_slice(), b[v].as_slice()) {
                ([], _) | (_, []) => 1,
                (&[u1, u2], &[v1, v2]) => {
                    let at = |x: usize, y: usize| m[x * nb + y];
                    at(u, v1)
                        .max(at(u, v2))
                        .max(at(u1, v))
                        .max(at(u2, v))
                        .max(at(u1, v1) + at(u2, v2))
                        .max(at(u1, v2) + at(u2, v1))
                }
                _ => unreachable!("binary"),
            };
            m[u * nb + v] = val;
        }
    }
    Ok(m[a.len() * nb - 1])
}

/// Closed form `2^h1 (m + 1 - h1)` with `m = min(h1 + l1 - 1, h2 + l2 - 1)`
/// and `h1 <= h2` (arguments are swapped as needed).
pub fn jellyfish_mast(s1: JellyfishSpec, s2: JellyfishSpec) -> Result<u64> {
    s1.validate()?;
    s2.validate()?;
    let (s1, s2) = if s1.h <= s2.h { (s1, s2) } else { (s2, s1) };
    let m = s1.height().min(s2.height()) as u64;
    Ok((1u64 << s1.h) * (m + 1 - s1.h as u64))
}
