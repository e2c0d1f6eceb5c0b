//! Tilings of the integers by a finitely supported function at a given
//! level: periodic-set checks, complement search over a cyclic group, and
//! spectral diagnostics.
//!
//! A function `f` on `Z` tiles at level `w` with a translation set `S` when
//! `sum_{s in S} f(n - s) = w` for every integer `n`. For `m`-periodic sets
//! the sum is `m`-periodic too, so everything reduces to the cyclic group
//! `Z_m`, where the same statement reads: the cyclic convolution of the
//! folded tile with the residue indicator is constant. Checks run both in
//! the time domain and through the DFT, and a backtracking search enumerates
//! all residue sets that complete a given tile to a tiling.

use num_complex::Complex64;
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use thiserror::Error;

/// Absolute tolerance for tiling sums with non-integral data. Instances
/// whose tile values and level are all integers are checked exactly instead.
pub const SUM_TOL: f64 = 1e-12;

/// Relative tolerance for the DFT route.
pub const DFT_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum ZtileError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("residue {residue} outside modulus {modulus}")]
    ResidueOutOfRange { residue: usize, modulus: usize },
    #[error("tile has no nonzero values")]
    DegenerateTile,
    #[error("modulus {modulus} exceeds the {mode} search cap of {cap}")]
    SearchSpaceTooLarge {
        modulus: usize,
        cap: usize,
        mode: &'static str,
    },
}

/// Finitely supported real function on the integers. Exact zeros are not
/// stored, so the support is always the set of keys.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZFunction {
    values: BTreeMap<i64, f64>,
}

impl ZFunction {
    pub fn new() -> Self {
        ZFunction::default()
    }

    /// Accumulates pairs; offsets appearing twice add up, zeros vanish.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, f64)>) -> Self {
        let mut f = ZFunction::new();
        for (n, v) in pairs {
            f.set(n, f.get(n) + v);
        }
        f
    }

    pub fn set(&mut self, n: i64, value: f64) {
        if value == 0.0 {
            self.values.remove(&n);
        } else {
            self.values.insert(n, value);
        }
    }

    pub fn get(&self, n: i64) -> f64 {
        self.values.get(&n).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values.iter().map(|(&n, &v)| (n, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Width of the support, zero when fewer than two points.
    pub fn diameter(&self) -> i64 {
        match (
            self.values.keys().next(),
            self.values.keys().next_back(),
        ) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }
}

/// Periodic subset of the integers, stored as residues modulo `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZSet {
    modulus: usize,
    residues: BTreeSet<usize>,
}

impl ZSet {
    pub fn new(
        modulus: usize,
        residues: impl IntoIterator<Item = usize>,
    ) -> Result<Self, ZtileError> {
        if modulus == 0 {
            return Err(ZtileError::ZeroModulus);
        }
        let mut set = BTreeSet::new();
        for r in residues {
            if r >= modulus {
                return Err(ZtileError::ResidueOutOfRange {
                    residue: r,
                    modulus,
                });
            }
            set.insert(r);
        }
        Ok(ZSet {
            modulus,
            residues: set,
        })
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn residues(&self) -> &BTreeSet<usize> {
        &self.residues
    }

    pub fn contains(&self, n: i64) -> bool {
        let r = n.rem_euclid(self.modulus as i64) as usize;
        self.residues.contains(&r)
    }

    /// Membership over one period, indexed by residue.
    pub fn indicator(&self) -> Vec<bool> {
        let mut ind = vec![false; self.modulus];
        for &r in &self.residues {
            ind[r] = true;
        }
        ind
    }

    /// The same subset of `Z` presented with its minimal period.
    pub fn reduced(&self) -> ZSet {
        let d = minimal_period(&self.indicator());
        let residues: BTreeSet<usize> = self.residues.iter().map(|&r| r % d).collect();
        ZSet {
            modulus: d,
            residues,
        }
    }
}

/// A parsed problem statement: tile the integers by `tile` at level `level`,
/// restricting candidate sets to period `modulus`.
#[derive(Debug, Clone, PartialEq)]
pub struct TilingInstance {
    pub modulus: usize,
    pub level: f64,
    pub tile: ZFunction,
}

impl TilingInstance {
    /// Folds the tile into the cyclic group `Z_modulus` (offsets reduce
    /// modulo `m`, collisions add).
    pub fn cyclic(&self) -> CyclicInstance {
        let m = self.modulus;
        let mut tile = vec![0.0; m];
        for (n, v) in self.tile.iter() {
            tile[n.rem_euclid(m as i64) as usize] += v;
        }
        CyclicInstance {
            modulus: m,
            level: self.level,
            tile,
        }
    }
}

/// The instance folded into `Z_m`: a dense tile vector indexed by residue.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicInstance {
    pub modulus: usize,
    pub level: f64,
    pub tile: Vec<f64>,
}

/// Parses the two-line instance format:
///
/// ```text
/// N=<modulus> w=<level>
/// <offset>:<value> <offset>:<value> ...
/// ```
///
/// Blank lines and lines starting with `#` are ignored. Duplicate offsets
/// are rejected rather than summed, since a hand-written instance repeating
/// an offset is almost certainly a mistake.
pub fn parse_instance(text: &str) -> Result<TilingInstance, ZtileError> {
    let parse_err = |line: usize, msg: String| ZtileError::Parse { line, msg };
    let mut content: Vec<(usize, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        content.push((i + 1, line));
    }
    match content.len() {
        0 => {
            return Err(parse_err(
                1,
                "missing header line 'N=<modulus> w=<level>'".to_string(),
            ))
        }
        1 => {
            return Err(parse_err(
                content[0].0,
                "missing tile line of 'offset:value' pairs".to_string(),
            ))
        }
        2 => {}
        _ => {
            return Err(parse_err(
                content[2].0,
                "unexpected extra content line".to_string(),
            ))
        }
    }

    let (header_line, header) = content[0];
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 2 || !tokens[0].starts_with("N=") || !tokens[1].starts_with("w=") {
        return Err(parse_err(
            header_line,
            format!("expected 'N=<modulus> w=<level>', got '{header}'"),
        ));
    }
    let modulus: usize = tokens[0][2..]
        .parse()
        .map_err(|_| parse_err(header_line, format!("invalid modulus '{}'", &tokens[0][2..])))?;
    if modulus == 0 {
        return Err(parse_err(header_line, "modulus must be at least 1".to_string()));
    }
    let level: f64 = tokens[1][2..]
        .parse()
        .map_err(|_| parse_err(header_line, format!("invalid level '{}'", &tokens[1][2..])))?;
    if !level.is_finite() {
        return Err(parse_err(header_line, "level must be finite".to_string()));
    }

    let (tile_line, pairs) = content[1];
    let mut seen: BTreeMap<i64, f64> = BTreeMap::new();
    for token in pairs.split_whitespace() {
        let (off_str, val_str) = token.split_once(':').ok_or_else(|| {
            parse_err(tile_line, format!("expected 'offset:value', got '{token}'"))
        })?;
        let offset: i64 = off_str
            .parse()
            .map_err(|_| parse_err(tile_line, format!("invalid offset '{off_str}'")))?;
        let value: f64 = val_str
            .parse()
            .map_err(|_| parse_err(tile_line, format!("invalid value '{val_str}'")))?;
        if !value.is_finite() {
            return Err(parse_err(tile_line, format!("value '{val_str}' not finite")));
        }
        if seen.insert(offset, value).is_some() {
            return Err(parse_err(tile_line, format!("duplicate offset {offset}")));
        }
    }
    let tile = ZFunction::from_pairs(seen);
    if tile.is_empty() {
        return Err(parse_err(tile_line, "tile has no nonzero values".to_string()));
    }
    Ok(TilingInstance {
        modulus,
        level,
        tile,
    })
}

/// Integer view of the data when every value (and the level) is an integer
/// small enough for exact arithmetic; `None` switches checks to the float
/// tolerance.
fn exact_level(values: impl Iterator<Item = f64>, level: f64) -> Option<(Vec<i128>, i128)> {
    const LIMIT: f64 = 1e15;
    let mut out = Vec::new();
    for v in values {
        if v.fract() != 0.0 || v.abs() > LIMIT {
            return None;
        }
        out.push(v as i128);
    }
    if level.fract() != 0.0 || level.abs() > LIMIT {
        return None;
    }
    Some((out, level as i128))
}

/// Checks `sum_{s in S} tile(n - s) = level` for all integers `n`.
///
/// The set is `m`-periodic, so the sum is too; the scan covers
/// `max(m + diameter + 1, horizon)` consecutive integers, which is at least
/// one full period. Integer instances are compared exactly, everything else
/// within [`SUM_TOL`].
pub fn z_tiling_check(tile: &ZFunction, set: &ZSet, level: f64, horizon: usize) -> bool {
    assert!(!tile.is_empty(), "tile must have nonzero values");
    let span = (set.modulus() + tile.diameter() as usize + 1).max(horizon);
    let offsets: Vec<(i64, f64)> = tile.iter().collect();
    match exact_level(offsets.iter().map(|&(_, v)| v), level) {
        Some((ints, w)) => (0..span as i64).all(|n| {
            let h: i128 = offsets
                .iter()
                .zip(&ints)
                .filter(|((d, _), _)| set.contains(n - d))
                .map(|(_, &v)| v)
                .sum();
            h == w
        }),
        None => (0..span as i64).all(|n| {
            let h: f64 = offsets
                .iter()
                .filter(|(d, _)| set.contains(n - d))
                .map(|&(_, v)| v)
                .sum();
            (h - level).abs() <= SUM_TOL
        }),
    }
}

/// Time-domain check on the cyclic group: the convolution of the folded
/// tile with the residue indicator must equal the level at every residue.
pub fn cyclic_convolution_check(inst: &CyclicInstance, residues: &BTreeSet<usize>) -> bool {
    let m = inst.modulus;
    debug_assert!(residues.iter().all(|&r| r < m), "residues out of range");
    match exact_level(inst.tile.iter().copied(), inst.level) {
        Some((ints, w)) => (0..m).all(|n| {
            let h: i128 = residues.iter().map(|&r| ints[(n + m - r) % m]).sum();
            h == w
        }),
        None => (0..m).all(|n| {
            let h: f64 = residues.iter().map(|&r| inst.tile[(n + m - r) % m]).sum();
            (h - inst.level).abs() <= SUM_TOL
        }),
    }
}

/// Fourier-domain check: a cyclic tiling at level `w` is equivalent to
/// `tile_hat(j) * indicator_hat(j) = w * m * delta_{j,0}` for every
/// frequency `j`. Uses a direct quadratic DFT, so it shares nothing with
/// the time-domain route. The tolerance is relative to `max(1, |w| * m)`;
/// genuine violations for integer instances sit at distance at least 1 in
/// the product, far above it.
pub fn dft_tiling_check(inst: &CyclicInstance, residues: &BTreeSet<usize>) -> bool {
    let m = inst.modulus;
    debug_assert!(residues.iter().all(|&r| r < m), "residues out of range");
    let scale = DFT_TOL * (inst.level.abs() * m as f64).max(1.0);
    for j in 0..m {
        let omega = -2.0 * PI * j as f64 / m as f64;
        let tile_hat: Complex64 = inst
            .tile
            .iter()
            .enumerate()
            .map(|(n, &v)| v * Complex64::from_polar(1.0, omega * n as f64))
            .sum();
        let ind_hat: Complex64 = residues
            .iter()
            .map(|&r| Complex64::from_polar(1.0, omega * r as f64))
            .sum();
        let target = if j == 0 {
            Complex64::new(inst.level * m as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
        if (tile_hat * ind_hat - target).norm() > scale {
            return false;
        }
    }
    true
}

/// Caps on the search modulus: backtracking with overshoot pruning needs
/// nonnegative tiles; tiles with negative values fall back to exhaustive
/// subset enumeration, which is viable only for smaller groups.
#[derive(Debug, Clone, Copy)]
pub struct SearchCaps {
    pub pruned: usize,
    pub exhaustive: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps {
            pruned: 28,
            exhaustive: 20,
        }
    }
}

/// Enumerates every residue set `S` of `Z_m` with
/// `sum_{s in S} tile((n - s) mod m) = level` for all `n`, in increasing
/// lexicographic order.
///
/// Nonnegative tiles use backtracking: pick the leftmost residue whose sum
/// is still short of the level, branch over the translates that cover it
/// (banning each candidate after its branch, so unordered sets are produced
/// once), and prune any branch that overshoots the level somewhere. Tiles
/// with negative values admit no overshoot pruning and are enumerated
/// exhaustively. Every hit is re-verified with
/// [`cyclic_convolution_check`] before being returned.
pub fn complement_search(
    inst: &CyclicInstance,
    caps: &SearchCaps,
) -> Result<Vec<BTreeSet<usize>>, ZtileError> {
    let m = inst.modulus;
    if inst.tile.iter().all(|&v| v == 0.0) {
        return Err(ZtileError::DegenerateTile);
    }
    let nonneg = inst.tile.iter().all(|&v| v >= 0.0);
    let mut results: Vec<BTreeSet<usize>> = Vec::new();
    if nonneg {
        if m > caps.pruned {
            return Err(ZtileError::SearchSpaceTooLarge {
                modulus: m,
                cap: caps.pruned,
                mode: "pruned",
            });
        }
        let tol = if exact_level(inst.tile.iter().copied(), inst.level).is_some() {
            0.0
        } else {
            SUM_TOL
        };
        let mut state = PrunedState {
            inst,
            tol,
            sums: vec![0.0; m],
            chosen: Vec::new(),
            banned: vec![false; m],
            results: &mut results,
        };
        state.recurse();
    } else {
        if m > caps.exhaustive {
            return Err(ZtileError::SearchSpaceTooLarge {
                modulus: m,
                cap: caps.exhaustive,
                mode: "exhaustive",
            });
        }
        let mut sums = vec![0.0; m];
        let mut chosen = Vec::new();
        exhaustive_recurse(inst, 0, &mut sums, &mut chosen, &mut results);
    }
    results.retain(|s| cyclic_convolution_check(inst, s));
    results.sort();
    Ok(results)
}

struct PrunedState<'a> {
    inst: &'a CyclicInstance,
    tol: f64,
    sums: Vec<f64>,
    chosen: Vec<usize>,
    banned: Vec<bool>,
    results: &'a mut Vec<BTreeSet<usize>>,
}

impl PrunedState<'_> {
    fn recurse(&mut self) {
        let m = self.inst.modulus;
        let w = self.inst.level;
        let uncovered = (0..m).find(|&n| self.sums[n] < w - self.tol);
        let Some(target) = uncovered else {
            self.results.push(self.chosen.iter().copied().collect());
            return;
        };
        // Any completion must cover `target` with some translate that is
        // positive there; ban each candidate after exploring it so the
        // branches partition the solution set.
        let mut banned_here = Vec::new();
        for s in 0..m {
            if self.banned[s] || self.chosen.contains(&s) {
                continue;
            }
            if self.inst.tile[(target + m - s) % m] <= 0.0 {
                continue;
            }
            let overshoots = (0..m)
                .any(|n| self.sums[n] + self.inst.tile[(n + m - s) % m] > w + self.tol);
            if !overshoots {
                for n in 0..m {
                    self.sums[n] += self.inst.tile[(n + m - s) % m];
                }
                self.chosen.push(s);
                self.recurse();
                self.chosen.pop();
                for n in 0..m {
                    self.sums[n] -= self.inst.tile[(n + m - s) % m];
                }
            }
            self.banned[s] = true;
            banned_here.push(s);
        }
        for s in banned_here {
            self.banned[s] = false;
        }
    }
}

fn exhaustive_recurse(
    inst: &CyclicInstance,
    next: usize,
    sums: &mut Vec<f64>,
    chosen: &mut Vec<usize>,
    results: &mut Vec<BTreeSet<usize>>,
) {
    let m = inst.modulus;
    if next == m {
        let w = inst.level;
        if sums.iter().all(|&h| (h - w).abs() <= SUM_TOL) {
            results.push(chosen.iter().copied().collect());
        }
        return;
    }
    exhaustive_recurse(inst, next + 1, sums, chosen, results);
    for n in 0..m {
        sums[n] += inst.tile[(n + m - next) % m];
    }
    chosen.push(next);
    exhaustive_recurse(inst, next + 1, sums, chosen, results);
    chosen.pop();
    for n in 0..m {
        sums[n] -= inst.tile[(n + m - next) % m];
    }
}

/// Smallest period of a membership pattern: the least divisor `d` of the
/// length under which the pattern is shift-invariant.
pub fn minimal_period(indicator: &[bool]) -> usize {
    let m = indicator.len();
    assert!(m >= 1, "empty indicator has no period");
    for d in 1..m {
        if m % d == 0 && (0..m).all(|i| indicator[i] == indicator[(i + d) % m]) {
            return d;
        }
    }
    m
}

/// Cesaro-smoothed spectrum of a set of integers:
///
/// ```text
/// sigma_N(t) = sum_{|n| < N} (1 - |n|/N) * 1_set(n) * e^{-2 pi i n t},
/// ```
///
/// sampled at `nfreq` uniform frequencies on `[0, 1)` and reported as
/// `(t, |sigma_N(t)|)`. Periodic structure shows up as peaks at rational
/// frequencies.
pub fn smoothed_spectrum(
    member: impl Fn(i64) -> bool,
    taper_n: usize,
    nfreq: usize,
) -> Vec<(f64, f64)> {
    assert!(taper_n >= 1, "taper length must be positive");
    assert!(nfreq >= 1, "need at least one frequency");
    let n = taper_n as i64;
    let weighted: Vec<(i64, f64)> = (-(n - 1)..n)
        .filter(|&k| member(k))
        .map(|k| (k, 1.0 - k.abs() as f64 / taper_n as f64))
        .collect();
    (0..nfreq)
        .map(|j| {
            let t = j as f64 / nfreq as f64;
            let acc: Complex64 = weighted
                .iter()
                .map(|&(k, wgt)| wgt * Complex64::from_polar(1.0, -2.0 * PI * k as f64 * t))
                .sum();
            (t, acc.norm())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance(text: &str) -> TilingInstance {
        parse_instance(text).unwrap()
    }

    #[test]
    fn zfunction_drops_zeros_and_sums_pairs() {
        let f = ZFunction::from_pairs([(0, 1.0), (3, 2.0), (0, -1.0), (5, 0.0)]);
        assert_eq!(f.len(), 1);
        assert_eq!(f.get(3), 2.0);
        assert_eq!(f.get(0), 0.0);
        assert_eq!(f.diameter(), 0);
        let g = ZFunction::from_pairs([(-2, 1.0), (4, 1.0)]);
        assert_eq!(g.diameter(), 6);
    }

    #[test]
    fn parse_accepts_ordinary_instance() {
        let inst = instance("# two-point tile on Z_6\nN=6 w=1\n0:1 1:1\n");
        assert_eq!(inst.modulus, 6);
        assert_eq!(inst.level, 1.0);
        assert_eq!(inst.tile.get(0), 1.0);
        assert_eq!(inst.tile.get(1), 1.0);
    }

    #[test]
    fn parse_rejects_malformed_input() {
        let cases: Vec<(&str, usize)> = vec![
            ("", 1),
            ("N=6 w=1\n", 1),
            ("N=6 w=1\n0:1\nextra\n", 3),
            ("n=6 w=1\n0:1", 1),
            ("N=six w=1\n0:1", 1),
            ("N=0 w=1\n0:1", 1),
            ("N=6 w=inf\n0:1", 1),
            ("N=6 w=1\n0:1 0:2", 2),
            ("N=6 w=1\nzero:1", 2),
            ("N=6 w=1\n0:one", 2),
            ("N=6 w=1\n0:0", 2),
        ];
        for (text, want_line) in cases {
            match parse_instance(text) {
                Err(ZtileError::Parse { line, .. }) => {
                    assert_eq!(line, want_line, "input {text:?}")
                }
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn folding_reduces_offsets_modulo_m() {
        let inst = instance("N=4 w=1\n-1:2 7:3 0:1");
        let cyc = inst.cyclic();
        assert_eq!(cyc.tile, vec![1.0, 0.0, 0.0, 5.0]);
    }

    #[test]
    fn z_check_accepts_even_integers_for_domino() {
        let tile = ZFunction::from_pairs([(0, 1.0), (1, 1.0)]);
        let evens = ZSet::new(2, [0]).unwrap();
        assert!(z_tiling_check(&tile, &evens, 1.0, 50));
        assert!(!z_tiling_check(&tile, &evens, 2.0, 50));
        let all = ZSet::new(1, [0]).unwrap();
        assert!(z_tiling_check(&tile, &all, 2.0, 50));
    }

    #[test]
    fn z_check_handles_fractional_values() {
        let tile = ZFunction::from_pairs([(0, 0.5), (2, 0.5)]);
        let all = ZSet::new(1, [0]).unwrap();
        assert!(z_tiling_check(&tile, &all, 1.0, 20));
        let evens = ZSet::new(2, [0]).unwrap();
        assert!(!z_tiling_check(&tile, &evens, 1.0, 20));
    }

    #[test]
    fn exact_mode_rejects_off_by_one_levels() {
        let tile = ZFunction::from_pairs([(0, 1.0), (1, 1.0), (2, 1.0)]);
        let thirds = ZSet::new(3, [0]).unwrap();
        assert!(z_tiling_check(&tile, &thirds, 1.0, 30));
        assert!(!z_tiling_check(&tile, &thirds, 0.0, 30));
    }

    #[test]
    fn cyclic_and_dft_checks_agree() {
        let texts = [
            "N=6 w=1\n0:1 1:1",
            "N=6 w=2\n0:1 1:1",
            "N=4 w=1\n0:1 2:1",
            "N=9 w=1\n0:1 1:1 2:1",
            "N=8 w=3\n0:1 1:2 2:1",
        ];
        let candidates: Vec<BTreeSet<usize>> = vec![
            [0usize, 2, 4].into_iter().collect(),
            [0usize, 3].into_iter().collect(),
            [0usize, 1].into_iter().collect(),
            [0usize, 3, 6].into_iter().collect(),
            (0usize..8).collect(),
        ];
        for text in texts {
            let cyc = instance(text).cyclic();
            for cand in &candidates {
                if cand.iter().any(|&r| r >= cyc.modulus) {
                    continue;
                }
                assert_eq!(
                    cyclic_convolution_check(&cyc, cand),
                    dft_tiling_check(&cyc, cand),
                    "disagree on {text:?} with {cand:?}"
                );
            }
        }
    }

    #[test]
    fn search_finds_both_domino_complements() {
        let cyc = instance("N=6 w=1\n0:1 1:1").cyclic();
        let found = complement_search(&cyc, &SearchCaps::default()).unwrap();
        let expect: Vec<BTreeSet<usize>> = vec![
            [0usize, 2, 4].into_iter().collect(),
            [1usize, 3, 5].into_iter().collect(),
        ];
        assert_eq!(found, expect);
    }

    #[test]
    fn search_handles_weighted_levels() {
        // covering every residue twice with a two-point tile
        let cyc = instance("N=4 w=2\n0:1 1:1").cyclic();
        let found = complement_search(&cyc, &SearchCaps::default()).unwrap();
        assert_eq!(found, vec![(0usize..4).collect::<BTreeSet<usize>>()]);
    }

    #[test]
    fn search_supports_negative_tiles_exhaustively() {
        let cyc = instance("N=3 w=1\n0:2 1:-1").cyclic();
        let found = complement_search(&cyc, &SearchCaps::default()).unwrap();
        assert_eq!(found, vec![(0usize..3).collect::<BTreeSet<usize>>()]);
    }

    #[test]
    fn search_caps_are_enforced() {
        let cyc = instance("N=30 w=1\n0:1 1:1").cyclic();
        match complement_search(&cyc, &SearchCaps::default()) {
            Err(ZtileError::SearchSpaceTooLarge { cap: 28, mode, .. }) => {
                assert_eq!(mode, "pruned")
            }
            other => panic!("expected cap error, got {other:?}"),
        }
        let neg = instance("N=21 w=1\n0:2 1:-1").cyclic();
        match complement_search(&neg, &SearchCaps::default()) {
            Err(ZtileError::SearchSpaceTooLarge { cap: 20, mode, .. }) => {
                assert_eq!(mode, "exhaustive")
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn search_rejects_all_zero_tiles() {
        let cyc = CyclicInstance {
            modulus: 4,
            level: 0.0,
            tile: vec![0.0; 4],
        };
        assert_eq!(
            complement_search(&cyc, &SearchCaps::default()),
            Err(ZtileError::DegenerateTile)
        );
    }

    #[test]
    fn found_sets_pass_z_check_at_minimal_period() {
        let inst = instance("N=6 w=1\n0:1 1:1");
        let found = complement_search(&inst.cyclic(), &SearchCaps::default()).unwrap();
        for residues in found {
            let set = ZSet::new(6, residues).unwrap().reduced();
            assert_eq!(set.modulus(), 2);
            assert!(z_tiling_check(&inst.tile, &set, inst.level, 40));
        }
    }

    #[test]
    fn minimal_period_basics() {
        assert_eq!(minimal_period(&[true, false, true, false]), 2);
        assert_eq!(minimal_period(&[true, false, false]), 3);
        assert_eq!(minimal_period(&[true, true, true]), 1);
        assert_eq!(minimal_period(&[false]), 1);
    }

    #[test]
    fn reduced_set_keeps_membership() {
        let set = ZSet::new(6, [0, 2, 4]).unwrap();
        let red = set.reduced();
        assert_eq!(red.modulus(), 2);
        assert_eq!(red.residues().iter().copied().collect::<Vec<_>>(), vec![0]);
        for n in -12..12 {
            assert_eq!(set.contains(n), red.contains(n));
        }
    }

    #[test]
    fn spectrum_of_evens_peaks_at_half_integers() {
        let spec = smoothed_spectrum(|n| n % 2 == 0, 16, 8);
        assert_eq!(spec.len(), 8);
        assert!((spec[0].1 - 8.0).abs() < 1e-12, "peak at 0: {}", spec[0].1);
        assert!((spec[4].1 - 8.0).abs() < 1e-12, "peak at 1/2: {}", spec[4].1);
        assert!(spec[2].1 < 1e-12, "null at 1/4: {}", spec[2].1);
    }
}
