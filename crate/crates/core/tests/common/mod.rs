//! Brute-force reference implementations, written independently of the
//! library's algorithms. Trees are parsed straight from code strings.
#![allow(dead_code)]

use std::collections::BTreeSet;

use itertools::Itertools;
use utk_core::{Shape, Tanglegram};

/// A rooted tree read from a code string, children in textual order.
#[derive(Clone, Debug)]
pub enum T {
    Leaf(char),
    Node(Vec<T>),
}

pub fn parse(code: &str) -> T {
    fn go(b: &[u8], i: &mut usize) -> T {
        let c = b[*i];
        *i += 1;
        if c != b'(' {
            return T::Leaf(c as char);
        }
        let mut kids = Vec::new();
        while b[*i] != b')' {
            kids.push(go(b, i));
        }
        *i += 1;
        T::Node(kids)
    }
    let mut i = 0;
    let t = go(code.as_bytes(), &mut i);
    assert_eq!(i, code.len());
    t
}

/// AHU-style canonical string: children sorted as byte strings.
pub fn canon(t: &T) -> String {
    match t {
        T::Leaf(c) => c.to_string(),
        T::Node(k) => {
            let mut parts: Vec<String> = k.iter().map(canon).collect();
            parts.sort();
            format!("({})", parts.concat())
        }
    }
}

pub fn leaves(t: &T) -> Vec<char> {
    match t {
        T::Leaf(c) => vec![*c],
        T::Node(k) => k.iter().flat_map(leaves).collect(),
    }
}

/// Canonical string of the tree induced by the kept leaves (DFS positions).
pub fn induce(t: &T, keep: &[bool]) -> Option<String> {
    fn go(t: &T, keep: &[bool], next: &mut usize) -> Option<String> {
        match t {
            T::Leaf(c) => {
                let i = *next;
                *next += 1;
                keep[i].then(|| c.to_string())
            }
            T::Node(k) => {
                let mut parts: Vec<String> = k.iter().filter_map(|c| go(c, keep, next)).collect();
                match parts.len() {
                    0 => None,
                    1 => parts.pop(),
                    _ => {
                        parts.sort();
                        Some(format!("({})", parts.concat()))
                    }
                }
            }
        }
    }
    go(t, keep, &mut 0)
}

/// Canonical codes of every induced subtree with `w` white leaves,
/// including the host's red leaf when `red`.
pub fn induced_set(host: &T, w: usize, red: bool) -> BTreeSet<String> {
    let ls = leaves(host);
    let whites: Vec<usize> = (0..ls.len()).filter(|&i| ls[i] == 'o').collect();
    let red_pos = ls.iter().position(|&c| c == 'r');
    if red && red_pos.is_none() {
        return BTreeSet::new();
    }
    whites
        .iter()
        .copied()
        .combinations(w)
        .filter_map(|sub| {
            let mut keep = vec![false; ls.len()];
            for i in sub {
                keep[i] = true;
            }
            if red {
                keep[red_pos.unwrap()] = true;
            }
            induce(host, &keep)
        })
        .collect()
}

pub fn embeds(pattern: &str, host: &str) -> bool {
    let p = parse(pattern);
    let pl = leaves(&p);
    let w = pl.iter().filter(|&&c| c == 'o').count();
    induced_set(&parse(host), w, pl.contains(&'r')).contains(pattern)
}

/// All trees with `n` leaves and 2..=d children per internal vertex, as
/// canonical strings, built bottom-up from compositions.
pub fn all_shapes(n: usize, d: usize) -> BTreeSet<String> {
    let mut by: Vec<BTreeSet<String>> = vec![BTreeSet::new(), ["o".to_owned()].into()];
    for m in 2..=n {
        let mut set = BTreeSet::new();
        for k in 2..=d.min(m) {
            for comp in compositions(m, k) {
                let pools: Vec<Vec<&String>> = comp.iter().map(|&c| by[c].iter().collect()).collect();
                for pick in pools.into_iter().multi_cartesian_product() {
                    let mut parts: Vec<&str> = pick.iter().map(|s| s.as_str()).collect();
                    parts.sort();
                    set.insert(format!("({})", parts.concat()));
                }
            }
        }
        by.push(set);
    }
    by.swap_remove(n)
}

/// Trees with `n` white leaves and one red leaf.
pub fn all_redleaf(n: usize, d: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for s in all_shapes(n + 1, d) {
        let t = parse(&s);
        let total = leaves(&t).len();
        for r in 0..total {
            out.insert(recolor(&t, r));
        }
    }
    out
}

fn recolor(t: &T, red: usize) -> String {
    fn go(t: &T, red: usize, next: &mut usize) -> T {
        match t {
            T::Leaf(_) => {
                let i = *next;
                *next += 1;
                T::Leaf(if i == red { 'r' } else { 'o' })
            }
            T::Node(k) => T::Node(k.iter().map(|c| go(c, red, next)).collect()),
        }
    }
    canon(&go(t, red, &mut 0))
}

pub fn compositions(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return vec![vec![m]];
    }
    let mut out = Vec::new();
    for first in 1..=m - (k - 1) {
        for mut rest in compositions(m - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Minimal hosts for `n` found by scanning sizes upward, with universality
/// decided by `induced_set`.
pub fn brute_min_universal(n: usize, d: usize, redleaf: bool) -> (usize, BTreeSet<String>) {
    let targets = if redleaf { all_redleaf(n, d) } else { all_shapes(n, d) };
    for m in n.. {
        let hosts = if redleaf { all_redleaf(m, d) } else { all_shapes(m, d) };
        let good: BTreeSet<String> =
            hosts.into_iter().filter(|h| induced_set(&parse(h), n, redleaf).is_superset(&targets)).collect();
        if !good.is_empty() {
            return (m, good);
        }
    }
    unreachable!()
}

/// `tau_W` per vertex in preorder, via explicit component search on an
/// undirected adjacency list.
pub fn tau_by_components(code: &str) -> Vec<usize> {
    let t = parse(code);
    let mut adj: Vec<Vec<usize>> = Vec::new();
    let mut white: Vec<bool> = Vec::new();
    fn build(t: &T, parent: Option<usize>, adj: &mut Vec<Vec<usize>>, white: &mut Vec<bool>) {
        let id = adj.len();
        adj.push(Vec::new());
        white.push(matches!(t, T::Leaf('o')));
        if let Some(p) = parent {
            adj[p].push(id);
            adj[id].push(p);
        }
        if let T::Node(k) = t {
            for c in k {
                build(c, Some(id), adj, white);
            }
        }
    }
    build(&t, None, &mut adj, &mut white);
    (0..adj.len())
        .map(|v| {
            let mut seen = vec![false; adj.len()];
            seen[v] = true;
            let mut best = 0;
            for &start in &adj[v] {
                if seen[start] {
                    continue;
                }
                let mut stack = vec![start];
                seen[start] = true;
                let mut count = 0;
                while let Some(x) = stack.pop() {
                    count += usize::from(white[x]);
                    for &y in &adj[x] {
                        if !seen[y] {
                            seen[y] = true;
                            stack.push(y);
                        }
                    }
                }
                best = best.max(count);
            }
            best + usize::from(white[v])
        })
        .collect()
}

/// Largest common induced subtree size by trying every pair of leaf sets.
pub fn brute_mast(a: &str, b: &str) -> usize {
    let (ta, tb) = (parse(a), parse(b));
    let (na, nb) = (leaves(&ta).len(), leaves(&tb).len());
    (1..=na.min(nb))
        .rev()
        .find(|&k| !induced_set(&ta, k, false).is_disjoint(&induced_set(&tb, k, false)))
        .unwrap_or(0)
}

/// Plane tree with edge labels at the leaves.
#[derive(Clone, Debug)]
pub enum P {
    L(usize),
    N(Vec<P>),
}

fn plane_of(t: &T, label: &mut dyn FnMut() -> usize) -> P {
    match t {
        T::Leaf(_) => P::L(label()),
        T::Node(k) => P::N(k.iter().map(|c| plane_of(c, label)).collect()),
    }
}

/// All reorderings of children at every vertex.
pub fn embeddings(p: &P) -> Vec<P> {
    match p {
        P::L(_) => vec![p.clone()],
        P::N(k) => {
            let mut out = Vec::new();
            for order in (0..k.len()).permutations(k.len()) {
                let options: Vec<Vec<P>> = order.iter().map(|&i| embeddings(&k[i])).collect();
                for pick in options.into_iter().multi_cartesian_product() {
                    out.push(P::N(pick));
                }
            }
            out
        }
    }
}

fn shape_and_labels(p: &P, s: &mut String, labels: &mut Vec<usize>) {
    match p {
        P::L(l) => {
            s.push('o');
            labels.push(*l);
        }
        P::N(k) => {
            s.push('(');
            for c in k {
                shape_and_labels(c, s, labels);
            }
            s.push(')');
        }
    }
}

fn labeled_canon(p: &P, rank: &[usize]) -> String {
    match p {
        P::L(l) => format!("[{}]", rank[*l]),
        P::N(k) => {
            let mut parts: Vec<String> = k.iter().map(|c| labeled_canon(c, rank)).collect();
            parts.sort();
            format!("({})", parts.concat())
        }
    }
}

/// Canonical form of a tanglegram given as two plane trees sharing edge
/// labels: minimum over all plane drawings of the left tree.
pub fn tangle_canon(left: &P, right: &P, edges: usize) -> String {
    embeddings(left)
        .iter()
        .map(|e| {
            let (mut s, mut labels) = (String::new(), Vec::new());
            shape_and_labels(e, &mut s, &mut labels);
            let mut rank = vec![usize::MAX; edges];
            for (i, &l) in labels.iter().enumerate() {
                rank[l] = i;
            }
            format!("{s}|{}", labeled_canon(right, &rank))
        })
        .min()
        .unwrap()
}

/// Library tanglegram as a pair of edge-labeled plane trees.
pub fn to_planes(t: &Tanglegram) -> (P, P) {
    let mut i = 0;
    let left = plane_of(&parse(t.left().code()), &mut || {
        i += 1;
        i - 1
    });
    let mut inv = vec![0; t.size()];
    for (e, &r) in t.matching().iter().enumerate() {
        inv[r] = e;
    }
    let mut j = 0;
    let right = plane_of(&parse(t.right().code()), &mut || {
        j += 1;
        inv[j - 1]
    });
    (left, right)
}

pub fn tangle_canon_of(t: &Tanglegram) -> String {
    let (l, r) = to_planes(t);
    tangle_canon(&l, &r, t.size())
}

/// Every plane binary tree with `n` leaves, leaves unlabeled (0).
pub fn plane_binary(n: usize) -> Vec<P> {
    if n == 1 {
        return vec![P::L(0)];
    }
    let mut out = Vec::new();
    for i in 1..n {
        for a in plane_binary(i) {
            for b in plane_binary(n - i) {
                out.push(P::N(vec![a.clone(), b]));
            }
        }
    }
    out
}

pub fn relabel(p: &P, labels: &[usize], next: &mut usize) -> P {
    match p {
        P::L(_) => {
            *next += 1;
            P::L(labels[*next - 1])
        }
        P::N(k) => P::N(k.iter().map(|c| relabel(c, labels, next)).collect()),
    }
}

/// Number of tanglegram classes of size `n`, by canonizing every
/// (plane left, plane right, permutation) triple.
pub fn brute_tanglegram_classes(n: usize) -> BTreeSet<String> {
    let trees = plane_binary(n);
    let id: Vec<usize> = (0..n).collect();
    let mut out = BTreeSet::new();
    for l in &trees {
        let left = relabel(l, &id, &mut 0);
        for r in &trees {
            for perm in (0..n).permutations(n) {
                let right = relabel(r, &perm, &mut 0);
                out.insert(tangle_canon(&left, &right, n));
            }
        }
    }
    out
}

/// Plane tree restricted to the kept edge labels, degree-2 vertices
/// suppressed.
pub fn restrict(p: &P, keep: &dyn Fn(usize) -> bool) -> Option<P> {
    match p {
        P::L(l) => keep(*l).then_some(P::L(*l)),
        P::N(k) => {
            let mut kids: Vec<P> = k.iter().filter_map(|c| restrict(c, keep)).collect();
            match kids.len() {
                0 => None,
                1 => kids.pop(),
                _ => Some(P::N(kids)),
            }
        }
    }
}

/// Canonical forms of all size-`k` subtanglegrams, edge labels compacted.
pub fn brute_induced(t: &Tanglegram, k: usize) -> BTreeSet<String> {
    let (l, r) = to_planes(t);
    (0..t.size())
        .combinations(k)
        .map(|sub| {
            let mut compact = vec![usize::MAX; t.size()];
            for (i, &e) in sub.iter().enumerate() {
                compact[e] = i;
            }
            let keep = |e: usize| compact[e] != usize::MAX;
            let rl = restrict(&l, &keep).unwrap();
            let rr = restrict(&r, &keep).unwrap();
            tangle_canon(&map_labels(&rl, &compact), &map_labels(&rr, &compact), k)
        })
        .collect()
}

fn map_labels(p: &P, m: &[usize]) -> P {
    match p {
        P::L(l) => P::L(m[*l]),
        P::N(k) => P::N(k.iter().map(|c| map_labels(c, m)).collect()),
    }
}

pub fn code_set(shapes: impl IntoIterator<Item = Shape>) -> BTreeSet<String> {
    shapes.into_iter().map(|s| s.code().to_owned()).collect()
}
