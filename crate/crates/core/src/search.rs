//! Universality checks and exhaustive search for minimum n-universal shapes.
//!
//! The search grows catalogs of all shapes level by level (by white-leaf
//! count). Each catalog entry keeps its [`EmbedTable`] row over every
//! pattern with at most `n` white leaves, so the row of a new shape is
//! derived from its parts' rows and universality is a mask test. Levels
//! are generated isomorph-free from multisets of smaller entries.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::chung_lower;
use crate::embedding::{covers, is_induced_subtree, EmbedTable};
use crate::error::{Error, Result};
use crate::shape::{complete, parse_code, CanonicalCode, Color, Enumerator, Shape};

/// Reusable checker for one `(n, d, redleaf)` pattern set.
pub struct UniversalityChecker {
    n: usize,
    arity: usize,
    redleaf: bool,
    table: EmbedTable,
    mask: Vec<u64>,
    balanced: Option<Shape>,
}

impl UniversalityChecker {
    pub fn new(n: usize, arity: usize, redleaf: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        let mut e = Enumerator::new(arity)?;
        let patterns = e.shapes(n, redleaf).to_vec();
        let table = EmbedTable::new(&patterns, arity);
        let mask = table.mask(&patterns);
        let balanced = (!redleaf && n >= 4).then(|| complete(n.ilog2() as usize).with_arity(arity)).transpose()?;
        Ok(UniversalityChecker { n, arity, redleaf, table, mask, balanced })
    }

    /// Cheap necessary conditions: enough leaves, a red leaf when needed,
    /// room for the caterpillar and the largest complete tree.
    pub fn prefilter(&self, t: &Shape) -> bool {
        let need_height = if self.redleaf { self.n } else { self.n - 1 };
        t.white_leaves() >= self.n
            && t.height() >= need_height
            && (!self.redleaf || t.has_red())
            && self.balanced.as_ref().is_none_or(|b| is_induced_subtree(b, t).unwrap_or(false))
    }

    pub fn check(&self, t: &Shape) -> Result<bool> {
        if t.arity() != self.arity {
            return Err(Error::ArityMismatch(self.arity, t.arity()));
        }
        if !self.prefilter(t) {
            return Ok(false);
        }
        Ok(covers(&self.table.host_row(t), &self.mask))
    }
}

/// Whether every shape with `n` white leaves (redleaf shapes when
/// `redleaf`) of `t`'s arity is an induced subtree of `t`.
pub fn is_universal(t: &Shape, n: usize, redleaf: bool) -> Result<bool> {
    UniversalityChecker::new(n, t.arity(), redleaf)?.check(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub max_candidates: Option<u64>,
    pub max_seconds: Option<f64>,
    /// `false` switches to plain enumeration plus a full check per shape.
    pub prune: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_candidates: None, max_seconds: None, prune: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub n: usize,
    pub d: usize,
    pub redleaf: bool,
    /// Minimum white-leaf count of an n-universal shape; `None` when a
    /// resource limit stopped the search first.
    pub u_value: Option<usize>,
    pub minimal_shapes: Vec<CanonicalCode>,
    /// First size at which candidates were tested.
    pub start_size: usize,
    /// Shapes tested for universality.
    pub candidates_examined: u64,
    /// False when a resource limit was hit; the report is then partial.
    pub authoritative: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

struct Limits<'a> {
    cfg: &'a SearchConfig,
    start: Instant,
    examined: AtomicU64,
    stop: AtomicBool,
}

impl Limits<'_> {
    fn charge(&self, k: u64) -> bool {
        let total = self.examined.fetch_add(k, Ordering::Relaxed) + k;
        let over_count = self.cfg.max_candidates.is_some_and(|m| total > m);
        let over_time = self.cfg.max_seconds.is_some_and(|s| self.start.elapsed().as_secs_f64() > s);
        if over_count || over_time {
            self.stop.store(true, Ordering::Relaxed);
        }
        !self.stop.load(Ordering::Relaxed)
    }

    fn stopped(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }
}

/// Computes `u(n)` (or `u_1(n)`, or the d-ary analogue) and every
/// universal shape of that size.
pub fn find_min_universal(n: usize, arity: usize, redleaf: bool, cfg: &SearchConfig) -> Result<SearchReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    crate::shape::check_arity(arity)?;
    let limits = Limits { cfg, start: Instant::now(), examined: AtomicU64::new(0), stop: AtomicBool::new(false) };
    let mut report = if cfg.prune {
        LevelSearch::new(n, arity, redleaf).run(&limits)
    } else {
        plain_search(n, arity, redleaf, &limits)?
    };
    report.candidates_examined = limits.examined.load(Ordering::Relaxed);
    report.authoritative = !limits.stopped();
    if !report.authoritative {
        report.u_value = None;
        report.minimal_shapes.clear();
    }
    report.wall_time_ms = Some(limits.start.elapsed().as_millis() as u64);
    Ok(report)
}

fn empty_report(n: usize, d: usize, redleaf: bool, start_size: usize) -> SearchReport {
    SearchReport {
        n,
        d,
        redleaf,
        u_value: None,
        minimal_shapes: Vec::new(),
        start_size,
        candidates_examined: 0,
        authoritative: true,
        wall_time_ms: None,
    }
}

/// Tests every shape of sizes `n, n+1, ...` with a fresh checker.
fn plain_search(n: usize, arity: usize, redleaf: bool, limits: &Limits) -> Result<SearchReport> {
    let checker = UniversalityChecker::new(n, arity, redleaf)?;
    let mut e = Enumerator::new(arity)?;
    let mut report = empty_report(n, arity, redleaf, n);
    for m in n.. {
        let shapes = e.shapes(m, redleaf).to_vec();
        if !limits.charge(shapes.len() as u64) {
            return Ok(report);
        }
        let found: Vec<CanonicalCode> = shapes
            .par_iter()
            .filter(|s| checker.check(s).expect("same arity"))
            .map(Shape::canonical_code)
            .collect();
        if !found.is_empty() {
            report.u_value = Some(m);
            report.minimal_shapes = found;
            return Ok(report);
        }
    }
    unreachable!("some size is universal")
}

/// Reference to a catalog entry: (level, index).
type Ref = (u32, u32);

#[derive(Default)]
struct Level {
    rows: Vec<u64>,
    parts: Vec<Ref>,
    offs: Vec<u32>,
}

impl Level {
    fn len(&self) -> usize {
        self.offs.len().saturating_sub(1)
    }

    fn parts(&self, i: usize) -> &[Ref] {
        &self.parts[self.offs[i] as usize..self.offs[i + 1] as usize]
    }

    fn from_entries(entries: Vec<(Vec<u64>, Vec<Ref>)>) -> Level {
        let mut l = Level { rows: Vec::new(), parts: Vec::new(), offs: vec![0] };
        for (row, parts) in entries {
            l.rows.extend(row);
            l.parts.extend(parts);
            l.offs.push(l.parts.len() as u32);
        }
        l
    }
}

struct LevelSearch {
    n: usize,
    arity: usize,
    redleaf: bool,
    table: EmbedTable,
    /// Target masks for `1..=n` (index 0 unused).
    masks: Vec<Vec<u64>>,
    white: Vec<Level>,
    red: Vec<Level>,
}

impl LevelSearch {
    fn new(n: usize, arity: usize, redleaf: bool) -> Self {
        let mut e = Enumerator::new(arity).expect("checked arity");
        let mut patterns = Vec::new();
        for m in 1..=n {
            patterns.extend(e.white(m).iter().cloned());
        }
        if redleaf {
            for m in 0..=n {
                patterns.extend(e.redleaf(m).iter().cloned());
            }
        }
        let table = EmbedTable::new(&patterns, arity);
        let mut masks = vec![Vec::new()];
        for m in 1..=n {
            masks.push(table.mask(e.shapes(m, redleaf)));
        }
        let mut white = vec![Level::default()];
        let mut leaf = vec![0; table.words()];
        table.leaf_row(Color::White, &mut leaf);
        white.push(Level::from_entries(vec![(leaf, Vec::new())]));
        LevelSearch { n, arity, redleaf, table, masks, white, red: Vec::new() }
    }

    fn row<'a>(&'a self, level: &'a [Level], r: Ref) -> &'a [u64] {
        let w = self.table.words();
        let i = r.1 as usize * w;
        &level[r.0 as usize].rows[i..i + w]
    }

    /// All multisets of white parts (nondecreasing refs, all >= `min`)
    /// with leaf total `remaining` and at most `max_parts` parts, appended
    /// to `prefix`. Each complete multiset is passed to `emit`.
    #[allow(clippy::too_many_arguments)]
    fn white_multisets(
        &self,
        remaining: usize,
        max_size: usize,
        min: Ref,
        max_parts: usize,
        prefix: &mut Vec<Ref>,
        min_total: usize,
        emit: &mut dyn FnMut(&[Ref]),
    ) {
        if remaining == 0 {
            if prefix.len() >= min_total {
                emit(prefix);
            }
            return;
        }
        if max_parts == 0 {
            return;
        }
        for size in (min.0 as usize)..=remaining.min(max_size) {
            let rest = remaining - size;
            if rest != 0 && (rest < size || max_parts == 1) {
                continue;
            }
            let start = if size == min.0 as usize { min.1 } else { 0 };
            for idx in start..self.white[size].len() as u32 {
                prefix.push((size as u32, idx));
                self.white_multisets(rest, max_size, (size as u32, idx), max_parts - 1, prefix, min_total, emit);
                prefix.pop();
            }
        }
    }

    fn combine_white(&self, parts: &[Ref], m: usize) -> Vec<u64> {
        let rows: Vec<&[u64]> = parts.iter().map(|&r| self.row(&self.white, r)).collect();
        let mut out = vec![0; self.table.words()];
        self.table.combine(&rows, m, &mut out);
        out
    }

    fn build_white(&self, m: usize, limits: &Limits) -> Level {
        // the smallest of at least two parts has at most m/2 leaves
        let firsts: Vec<Ref> = (1..=m / 2)
            .flat_map(|s| (0..self.white[s].len() as u32).map(move |i| (s as u32, i)))
            .collect();
        let chunks: Vec<Vec<(Vec<u64>, Vec<Ref>)>> = firsts
            .par_iter()
            .map(|&first| {
                let mut out = Vec::new();
                if limits.stopped() {
                    return out;
                }
                let mut prefix = vec![first];
                self.white_multisets(m - first.0 as usize, m - 1, first, self.arity - 1, &mut prefix, 2, &mut |p| {
                    out.push((self.combine_white(p, m), p.to_vec()));
                });
                out
            })
            .collect();
        Level::from_entries(chunks.into_iter().flatten().collect())
    }

    fn build_red(&self, m: usize, limits: &Limits) -> Level {
        let w = self.table.words();
        if m == 0 {
            let mut leaf = vec![0; w];
            self.table.leaf_row(Color::Red, &mut leaf);
            return Level::from_entries(vec![(leaf, Vec::new())]);
        }
        let firsts: Vec<Ref> =
            (0..m).flat_map(|s| (0..self.red[s].len() as u32).map(move |i| (s as u32, i))).collect();
        let chunks: Vec<Vec<(Vec<u64>, Vec<Ref>)>> = firsts
            .par_iter()
            .map(|&red| {
                let mut out = Vec::new();
                if limits.stopped() {
                    return out;
                }
                let red_row = self.row(&self.red, red);
                let mut prefix = vec![red];
                self.white_multisets(m - red.0 as usize, m, (1, 0), self.arity - 1, &mut prefix, 2, &mut |p| {
                    let mut rows: Vec<&[u64]> = vec![red_row];
                    rows.extend(p[1..].iter().map(|&r| self.row(&self.white, r)));
                    let mut row = vec![0; w];
                    self.table.combine(&rows, m, &mut row);
                    out.push((row, p.to_vec()));
                });
                out
            })
            .collect();
        Level::from_entries(chunks.into_iter().flatten().collect())
    }

    fn shape(&self, red: bool, r: Ref) -> Shape {
        let level = if red { &self.red[r.0 as usize] } else { &self.white[r.0 as usize] };
        let parts = level.parts(r.1 as usize);
        if parts.is_empty() {
            let c = if red { Color::Red } else { Color::White };
            return Shape::leaf_with_arity(c, self.arity).expect("checked arity");
        }
        let children = parts.iter().enumerate().map(|(i, &p)| self.shape(red && i == 0, p)).collect();
        Shape::internal(children, self.arity).expect("valid parts")
    }

    fn universal_in(&self, level: &Level, mask: &[u64]) -> Vec<u32> {
        let w = self.table.words();
        (0..level.len() as u32).filter(|&i| covers(&level.rows[i as usize * w..(i as usize + 1) * w], mask)).collect()
    }

    fn run(mut self, limits: &Limits) -> SearchReport {
        let (n, redleaf) = (self.n, self.redleaf);
        // u is nondecreasing, so sizes below the previous value are skipped;
        // for n = 2^k the inclusion-exclusion bound also applies
        let chung = if !redleaf && self.arity == 2 && n >= 4 && n.is_power_of_two() {
            chung_lower::<u64>(n.ilog2() as usize).map(|c| c.value as usize).unwrap_or(0)
        } else {
            0
        };
        let mut solved: Vec<Option<usize>> = vec![None; n + 1];
        let mut start_size = n.max(chung);
        let base = usize::from(!redleaf);
        for m in base.. {
            if redleaf {
                while self.white.len() <= m.max(1) {
                    let s = self.white.len();
                    let lvl = self.build_white(s, limits);
                    self.white.push(lvl);
                }
                let lvl = self.build_red(m, limits);
                self.red.push(lvl);
            } else if m >= self.white.len() {
                let lvl = self.build_white(m, limits);
                self.white.push(lvl);
            }
            if limits.stopped() {
                return empty_report(n, self.arity, redleaf, start_size);
            }
            let level = if redleaf { &self.red[m] } else { &self.white[m] };
            // smaller targets first: each solved value raises the next start
            let mut lower = 0;
            for (t, slot) in solved.iter_mut().enumerate().take(n).skip(1) {
                match *slot {
                    Some(u) => lower = lower.max(u),
                    None if m >= t.max(lower) => {
                        if !self.universal_in(level, &self.masks[t]).is_empty() {
                            *slot = Some(m);
                            lower = m;
                        } else {
                            break;
                        }
                    }
                    None => break,
                }
            }
            if (1..n).all(|t| solved[t].is_some()) {
                start_size = start_size.max(lower);
            } else {
                continue;
            }
            if m < start_size {
                continue;
            }
            if !limits.charge(level.len() as u64) {
                return empty_report(n, self.arity, redleaf, start_size);
            }
            let hits = self.universal_in(level, &self.masks[n]);
            if !hits.is_empty() {
                let mut codes: Vec<CanonicalCode> =
                    hits.iter().map(|&i| self.shape(redleaf, (m as u32, i)).canonical_code()).collect();
                codes.sort();
                codes.dedup();
                let mut report = empty_report(n, self.arity, redleaf, start_size);
                report.u_value = Some(m);
                report.minimal_shapes = codes;
                return report;
            }
        }
        unreachable!("some size is universal")
    }
}

/// Whether some minimal shape in `report` has all leaves at depth `<= n-1`.
pub fn check_depth_conjecture(report: &SearchReport) -> Result<bool> {
    if !report.authoritative || report.minimal_shapes.is_empty() {
        return Err(Error::InvalidParameter("report has no minimal universal shapes".into()));
    }
    for code in &report.minimal_shapes {
        let s = parse_code(code.as_str(), report.d)?;
        if s.height() < report.n {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::caterpillar;

    #[test]
    fn small_universal_checks() {
        assert!(is_universal(&complete(3), 4, false).unwrap());
        for n in 4..8 {
            assert!(!is_universal(&caterpillar(n + 3).unwrap(), n, false).unwrap());
        }
        assert!(is_universal(&caterpillar(3).unwrap(), 3, false).unwrap());
    }

    #[test]
    fn first_values() {
        let cfg = SearchConfig::default();
        let u: Vec<usize> = (1..=6).map(|n| find_min_universal(n, 2, false, &cfg).unwrap().u_value.unwrap()).collect();
        assert_eq!(u, [1, 2, 3, 5, 6, 9]);
        let r4 = find_min_universal(4, 2, false, &cfg).unwrap();
        let codes: Vec<&str> = r4.minimal_shapes.iter().map(|c| c.as_str()).collect();
        assert_eq!(codes, ["(((oo)(oo))o)", "(((oo)o)(oo))"]);
        assert!(check_depth_conjecture(&r4).unwrap());
    }

    #[test]
    fn limit_marks_partial() {
        let cfg = SearchConfig { max_candidates: Some(1), ..SearchConfig::default() };
        let r = find_min_universal(6, 2, false, &cfg).unwrap();
        assert!(!r.authoritative);
        assert_eq!(r.u_value, None);
        assert!(check_depth_conjecture(&r).is_err());
    }
}
