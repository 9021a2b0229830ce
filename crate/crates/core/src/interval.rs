//! Discrete interval graphs: minimal bridging paths, the snap map onto
//! `δℤ`, and the S1/S2/S3 decomposition of a bridging path's cover.
//!
//! Intervals are sets of consecutive integers `[lo, hi]`; the length of an
//! interval is `hi - lo`, its size is `hi - lo + 1` points.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::labels::LabelField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub lo: i64,
    pub hi: i64,
}

#[allow(clippy::len_without_is_empty)]
impl Interval {
    pub fn new(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "interval [{lo}, {hi}] is reversed");
        Interval { lo, hi }
    }

    pub fn len(&self) -> i64 {
        self.hi - self.lo
    }

    /// Number of integer points.
    pub fn size(&self) -> i64 {
        self.hi - self.lo + 1
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

impl From<(i64, i64)> for Interval {
    fn from((lo, hi): (i64, i64)) -> Self {
        Interval::new(lo, hi)
    }
}

/// A connected family of intervals inside `span = [a, b]` with `a` and `b` covered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
    span: Interval,
}

impl IntervalSet {
    pub fn new(intervals: Vec<Interval>, span: Interval) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidIntervalSet("no intervals"));
        }
        if intervals.iter().any(|i| i.lo < span.lo || i.hi > span.hi) {
            return Err(Error::InvalidIntervalSet("interval outside span"));
        }
        if !intervals.iter().any(|i| i.contains(span.lo)) || !intervals.iter().any(|i| i.contains(span.hi)) {
            return Err(Error::InvalidIntervalSet("span endpoint not covered"));
        }
        if !sweep_connected(&intervals) {
            return Err(Error::InvalidIntervalSet("interval graph is disconnected"));
        }
        Ok(IntervalSet { intervals, span })
    }

    /// Uses the hull `[min lo, max hi]` as the span.
    pub fn from_intervals(intervals: Vec<Interval>) -> Result<Self> {
        let lo = intervals.iter().map(|i| i.lo).min().ok_or(Error::InvalidIntervalSet("no intervals"))?;
        let hi = intervals.iter().map(|i| i.hi).max().unwrap();
        IntervalSet::new(intervals, Interval::new(lo, hi))
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn span(&self) -> Interval {
        self.span
    }
}

fn sweep_connected(intervals: &[Interval]) -> bool {
    let mut sorted: Vec<Interval> = intervals.to_vec();
    sorted.sort_unstable();
    let mut reach = sorted[0].hi;
    for i in &sorted[1..] {
        if i.lo > reach {
            return false;
        }
        reach = reach.max(i.hi);
    }
    true
}

/// A path `I_0, …, I_m` in an interval graph bridging the two ends of `span`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPath {
    intervals: Vec<Interval>,
    span: Interval,
}

impl IntervalPath {
    pub fn new(intervals: Vec<Interval>, span: Interval) -> Self {
        IntervalPath { intervals, span }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn span(&self) -> Interval {
        self.span
    }

    /// Number of hops `m`.
    pub fn hops(&self) -> usize {
        self.intervals.len() - 1
    }

    pub fn min_length(&self) -> i64 {
        self.intervals.iter().map(Interval::len).min().unwrap_or(0)
    }

    /// Consecutive intervals intersect, `I_0 ∋ a` and `I_m ∋ b`.
    pub fn bridges(&self) -> bool {
        !self.intervals.is_empty()
            && self.intervals[0].contains(self.span.lo)
            && self.intervals[self.hops()].contains(self.span.hi)
            && self.intervals.windows(2).all(|p| p[0].intersects(&p[1]))
    }

    /// Endpoint labels `x_0, …, x_{2m+1}`: `I_0 = [x_0, x_2]`,
    /// `I_k = [x_{2k-1}, x_{2k+2}]` for `0 < k < m`, `I_m = [x_{2m-1}, x_{2m+1}]`.
    /// A single interval is labelled `[x_0, x_1]`.
    pub fn endpoint_labels(&self) -> Vec<i64> {
        let m = self.hops();
        if m == 0 {
            return vec![self.intervals[0].lo, self.intervals[0].hi];
        }
        let mut x = vec![0; 2 * m + 2];
        x[0] = self.intervals[0].lo;
        x[2] = self.intervals[0].hi;
        for k in 1..m {
            x[2 * k - 1] = self.intervals[k].lo;
            x[2 * k + 2] = self.intervals[k].hi;
        }
        x[2 * m - 1] = self.intervals[m].lo;
        x[2 * m + 1] = self.intervals[m].hi;
        x
    }

    /// `x_{2k-1} <= x_{2k}` and, for `k >= 1`, `x_{2k} < x_{2k+1}`.
    pub fn endpoints_interleave(&self) -> bool {
        // x_{2k-1} = lo(I_k), x_{2k} = hi(I_{k-1}), x_{2k+1} = lo(I_{k+1})
        let iv = &self.intervals;
        let m = self.hops();
        (1..=m).all(|k| iv[k].lo <= iv[k - 1].hi && (k == m || iv[k - 1].hi < iv[k + 1].lo))
    }

    /// How many path intervals cover each point of the span, left to right.
    pub fn cover_multiplicities(&self) -> Vec<u32> {
        cover_counts(&self.intervals, self.span)
    }

    /// Every span point is covered by one or two path intervals.
    pub fn has_cover_one_or_two(&self) -> bool {
        (self.span.lo..=self.span.hi).all(|t| matches!(self.intervals.iter().filter(|i| i.contains(t)).count(), 1 | 2))
    }
}

fn cover_counts(intervals: &[Interval], span: Interval) -> Vec<u32> {
    let n = span.size() as usize;
    let mut diff = vec![0i64; n + 1];
    for i in intervals {
        let lo = (i.lo.max(span.lo) - span.lo) as usize;
        let hi = i.hi.min(span.hi) - span.lo;
        if hi < 0 || lo >= n {
            continue;
        }
        diff[lo] += 1;
        diff[hi as usize + 1] -= 1;
    }
    let mut acc = 0;
    diff[..n]
        .iter()
        .map(|d| {
            acc += d;
            acc as u32
        })
        .collect()
}

/// Shortest bridging path, ties broken by the lexicographically smallest
/// sequence of `(lo, hi)` pairs.
pub fn minimal_bridge_path(s: &IntervalSet) -> Result<IntervalPath> {
    let iv = s.intervals();
    let span = s.span();
    let n = iv.len();
    // hop distance from every interval to the nearest interval containing b
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for (i, it) in iv.iter().enumerate() {
        if it.contains(span.hi) {
            dist[i] = 0;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if dist[j] == usize::MAX && iv[i].intersects(&iv[j]) {
                dist[j] = dist[i] + 1;
                queue.push_back(j);
            }
        }
    }
    let best = |cands: &mut dyn Iterator<Item = usize>| cands.min_by_key(|&i| (iv[i], i));
    let start_dist = (0..n)
        .filter(|&i| iv[i].contains(span.lo))
        .map(|i| dist[i])
        .min()
        .filter(|&d| d != usize::MAX)
        .ok_or(Error::InvalidIntervalSet("no bridging path"))?;
    let mut cur = best(&mut (0..n).filter(|&i| iv[i].contains(span.lo) && dist[i] == start_dist)).unwrap();
    let mut path = vec![iv[cur]];
    while dist[cur] > 0 {
        let d = dist[cur] - 1;
        cur = best(&mut (0..n).filter(|&j| dist[j] == d && iv[cur].intersects(&iv[j]))).unwrap();
        path.push(iv[cur]);
    }
    Ok(IntervalPath::new(path, span))
}

pub const ORACLE_CAP: usize = 12;

/// Independent reference: plain BFS over the explicit interval graph from
/// the intervals containing `a`, stopping at the first one containing `b`.
pub fn oracle_bridge_path(s: &IntervalSet) -> Result<IntervalPath> {
    let iv = s.intervals();
    if iv.len() > ORACLE_CAP {
        return Err(Error::OracleCap(iv.len(), ORACLE_CAP));
    }
    let span = s.span();
    let n = iv.len();
    // the cap keeps all BFS state on the stack
    let mut parent = [usize::MAX; ORACLE_CAP];
    let mut seen = [false; ORACLE_CAP];
    let mut queue = [0usize; ORACLE_CAP];
    let (mut head, mut tail) = (0, 0);
    for i in 0..n {
        if iv[i].contains(span.lo) {
            seen[i] = true;
            queue[tail] = i;
            tail += 1;
        }
    }
    while head < tail {
        let i = queue[head];
        head += 1;
        if iv[i].contains(span.hi) {
            let mut path = vec![iv[i]];
            let mut cur = i;
            while parent[cur] != usize::MAX {
                cur = parent[cur];
                path.push(iv[cur]);
            }
            path.reverse();
            return Ok(IntervalPath::new(path, span));
        }
        for j in 0..n {
            if !seen[j] && j != i && iv[i].intersects(&iv[j]) {
                seen[j] = true;
                parent[j] = i;
                queue[tail] = j;
                tail += 1;
            }
        }
    }
    Err(Error::InvalidIntervalSet("no bridging path"))
}

/// How a snap map was obtained from the nearest-point rounding `ι'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapRepair {
    /// `ι'` already satisfied every invariant.
    Rounded,
    /// The three-way collision shift rule fixed every conflict.
    CollisionShift,
    /// A conflict the shift rule does not cover (two abutting overlaps, or
    /// ends of disjoint intervals rounding together) was resolved by the
    /// constrained search.
    Search,
}

/// The snap map: one grid point of `δℤ` per endpoint label of a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnapMap {
    pub delta: i64,
    pub repair: SnapRepair,
    labels: Vec<i64>,
    images: Vec<i64>,
}

/// Nearest point of `δℤ`, ties toward `-∞`.
pub fn nearest_grid_point(x: i64, delta: i64) -> i64 {
    let q = x.div_euclid(delta);
    let r = x.rem_euclid(delta);
    if 2 * r <= delta {
        q * delta
    } else {
        (q + 1) * delta
    }
}

impl SnapMap {
    /// Endpoint labels `x_i` of the path.
    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    /// `ι(x_i)`, aligned with [`SnapMap::labels`].
    pub fn images(&self) -> &[i64] {
        &self.images
    }

    /// Endpoint value to grid point. Equal endpoint values always share an image.
    pub fn assignments(&self) -> BTreeMap<i64, i64> {
        self.labels.iter().copied().zip(self.images.iter().copied()).collect()
    }

    pub fn max_displacement(&self) -> i64 {
        self.labels.iter().zip(&self.images).map(|(x, y)| (x - y).abs()).max().unwrap_or(0)
    }

    /// `I'' = [ι(lo), ι(hi)]` for every interval of `p`.
    pub fn snapped_intervals(&self, p: &IntervalPath) -> Vec<Interval> {
        let m = p.hops();
        let img = &self.images;
        if m == 0 {
            return vec![Interval::new(img[0], img[1])];
        }
        let mut out = Vec::with_capacity(m + 1);
        out.push(Interval::new(img[0], img[2]));
        for k in 1..m {
            out.push(Interval::new(img[2 * k - 1], img[2 * k + 2]));
        }
        out.push(Interval::new(img[2 * m - 1], img[2 * m + 1]));
        out
    }

    /// `x <= y` implies `ι(x) <= ι(y)`, as a function of endpoint values.
    pub fn is_monotone(&self) -> bool {
        let mut pairs: Vec<(i64, i64)> = self.labels.iter().copied().zip(self.images.iter().copied()).collect();
        pairs.sort_unstable();
        pairs.windows(2).all(|w| w[0].1 <= w[1].1 && (w[0].0 != w[1].0 || w[0].1 == w[1].1))
    }

    /// Every integer point lies in at most two snapped intervals.
    pub fn image_multiplicity_ok(&self, p: &IntervalPath) -> bool {
        let snapped = self.snapped_intervals(p);
        let lo = snapped.iter().map(|i| i.lo).min().unwrap();
        let hi = snapped.iter().map(|i| i.hi).max().unwrap();
        cover_counts(&snapped, Interval::new(lo, hi)).iter().all(|&c| c <= 2)
    }

    /// Consecutive path intervals stay intersecting after snapping.
    pub fn preserves_adjacency(&self, p: &IntervalPath) -> bool {
        self.snapped_intervals(p).windows(2).all(|w| w[0].intersects(&w[1]))
    }
}

/// Labels `i` where `ι(x_{i-1}) < ι(x_i)` is required: `x_{2k}` ends
/// `I_{k-1}` and `x_{2k+1}` starts the disjoint `I_{k+1}`.
fn is_gap(i: usize, hops: usize) -> bool {
    hops >= 2 && i % 2 == 1 && i >= 3 && i < 2 * hops
}

fn admissible(x: &[i64], img: &[i64], hops: usize, delta: i64) -> bool {
    x.iter().zip(img).all(|(a, b)| (a - b).abs() <= 2 * delta)
        && (1..x.len()).all(|i| {
            if x[i - 1] == x[i] {
                img[i - 1] == img[i]
            } else if is_gap(i, hops) {
                img[i - 1] < img[i]
            } else {
                img[i - 1] <= img[i]
            }
        })
}

/// The three-way collision rule applied to `ι'`, left to right. `None` when
/// a run of four or more labels shares a grid point or no free move exists.
fn collision_shift(x: &[i64], prime: &[i64], delta: i64) -> Option<Vec<i64>> {
    let mut img = prime.to_vec();
    let len = x.len();
    let mut i = 0;
    while i < len {
        let v = prime[i];
        let mut j = i;
        while j < len && prime[j] == v {
            j += 1;
        }
        match j - i {
            1 | 2 => {}
            3 => {
                // the left neighbour is final; the right one can only move onto a free point
                let up_ok = (j == len || prime[j] > v + delta) && x[i + 1] != x[i + 2];
                let down_ok = (i == 0 || img[i - 1] < v - delta) && x[i] != x[i + 1];
                let prefer_up = x[i + 2] > v;
                let up = match (prefer_up, up_ok, down_ok) {
                    (true, true, _) | (false, true, false) => true,
                    (false, _, true) | (true, false, true) => false,
                    (_, false, false) => return None,
                };
                if up {
                    img[i + 2] = v + delta;
                } else {
                    img[i] = v - delta;
                }
            }
            _ => return None,
        }
        i = j;
    }
    Some(img)
}

/// Cheapest admissible assignment: fewest labels moved off `ι'`, then least
/// total displacement, then smallest images left to right. Dynamic program
/// over the at most five grid points within `2δ` of each label.
fn constrained_search(x: &[i64], prime: &[i64], hops: usize, delta: i64) -> Option<Vec<i64>> {
    let cands: Vec<Vec<i64>> = x
        .iter()
        .map(|&v| {
            let lo = (v - 2 * delta).div_euclid(delta) + i64::from((v - 2 * delta).rem_euclid(delta) != 0);
            let hi = (v + 2 * delta).div_euclid(delta);
            (lo..=hi).map(|q| q * delta).collect()
        })
        .collect();
    let cost = |i: usize, g: i64| (i64::from(g != prime[i]), (g - x[i]).abs());
    // per label and candidate: (moved, displacement) cost and back pointer
    type Cell = Option<((i64, i64), usize)>;
    let mut best: Vec<Vec<Cell>> = Vec::with_capacity(x.len());
    best.push(cands[0].iter().map(|&g| Some((cost(0, g), usize::MAX))).collect());
    for i in 1..x.len() {
        let row = cands[i]
            .iter()
            .map(|&g| {
                let mut pick: Option<((i64, i64), usize)> = None;
                for (pi, &pg) in cands[i - 1].iter().enumerate() {
                    let ok = if x[i - 1] == x[i] {
                        pg == g
                    } else if is_gap(i, hops) {
                        pg < g
                    } else {
                        pg <= g
                    };
                    if !ok {
                        continue;
                    }
                    if let Some((c, _)) = best[i - 1][pi] {
                        let (m, d) = cost(i, g);
                        let total = (c.0 + m, c.1 + d);
                        if pick.is_none_or(|(b, _)| total < b) {
                            pick = Some((total, pi));
                        }
                    }
                }
                pick
            })
            .collect();
        best.push(row);
    }
    let last = x.len() - 1;
    let mut at = (0..cands[last].len())
        .filter_map(|c| best[last][c].map(|(cost, _)| (cost, c)))
        .min()?
        .1;
    let mut img = vec![0; x.len()];
    for i in (0..x.len()).rev() {
        img[i] = cands[i][at];
        at = best[i][at].unwrap().1;
    }
    Some(img)
}

/// Snaps the endpoints of a bridging path onto `δℤ`.
///
/// `ι'` rounds every label to the nearest grid point (ties down). Where
/// three labels share a grid point `v`, the top one moves to `v + δ` when it
/// lies above `v`, otherwise the bottom one moves to `v - δ`, taking the
/// other move if the preferred target is occupied. Conflicts this rule does
/// not see, such as the end of `I_{k-1}` and the start of `I_{k+1}` rounding
/// to the same point, fall through to a constrained search, so the result
/// always keeps displacement `<= 2δ`, monotonicity, adjacency and image
/// multiplicity `<= 2`.
pub fn snap_map(p: &IntervalPath, delta: i64) -> Result<SnapMap> {
    let min_len = p.min_length();
    if delta < 1 || 2 * delta > min_len {
        return Err(Error::DeltaTooLarge { delta, min_len });
    }
    let hops = p.hops();
    let x = p.endpoint_labels();
    let prime: Vec<i64> = x.iter().map(|&v| nearest_grid_point(v, delta)).collect();
    let (images, repair) = if admissible(&x, &prime, hops, delta) {
        (prime, SnapRepair::Rounded)
    } else if let Some(img) = collision_shift(&x, &prime, delta).filter(|img| admissible(&x, img, hops, delta)) {
        (img, SnapRepair::CollisionShift)
    } else {
        let img = constrained_search(&x, &prime, hops, delta)
            .ok_or_else(|| Error::CertificateViolation(format!("no admissible snap for {:?} at δ = {delta}", p.intervals())))?;
        (img, SnapRepair::Search)
    };
    Ok(SnapMap { delta, repair, labels: x, images })
}

/// Maximal runs of doubly covered points (S2) and of singly covered points,
/// the latter split alternately into S1 (1st, 3rd, …) and S3 (2nd, 4th, …).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct S123 {
    pub s1: Vec<Interval>,
    pub s2: Vec<Interval>,
    pub s3: Vec<Interval>,
}

impl S123 {
    pub fn total(&self) -> usize {
        self.s1.len() + self.s2.len() + self.s3.len()
    }
}

/// `|S1| + |S2| + |S3|`: the number of maximal runs of equal "doubly
/// covered" status along the span.
pub fn s123_count(p: &IntervalPath) -> usize {
    let span = p.span();
    let double = |t: i64| p.intervals().iter().filter(|i| i.contains(t)).count() == 2;
    1 + (span.lo + 1..=span.hi).filter(|&t| double(t) != double(t - 1)).count()
}

pub fn s123_decomposition(p: &IntervalPath) -> S123 {
    let span = p.span();
    let cover = p.cover_multiplicities();
    let mut out = S123::default();
    let mut ones = 0usize;
    let mut start = 0usize;
    for k in 1..=cover.len() {
        if k < cover.len() && (cover[k] == 2) == (cover[start] == 2) {
            continue;
        }
        let piece = Interval::new(span.lo + start as i64, span.lo + k as i64 - 1);
        if cover[start] == 2 {
            out.s2.push(piece);
        } else {
            ones += 1;
            if ones % 2 == 1 {
                out.s1.push(piece);
            } else {
                out.s3.push(piece);
            }
        }
        start = k;
    }
    out
}

/// Per-instance values of the counting inequalities for one bridging path.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCertificate {
    pub span_size: i64,
    pub d: i64,
    pub delta: i64,
    pub path_len: usize,
    /// `2 |span| / D`
    pub path_bound: f64,
    pub pieces: usize,
    /// `4 |span| / D`
    pub pieces_bound: f64,
    pub max_displacement: i64,
}

/// Checks `|I'| <= 2|span|/D`, `|S1 ∪ S2 ∪ S3| <= 4|span|/D` and snap
/// displacement `<= 2δ`, all in exact integer arithmetic.
pub fn bound_certificate(p: &IntervalPath, d: i64, delta: i64) -> Result<BoundCertificate> {
    if d < 1 || p.min_length() < d {
        return Err(Error::InvalidIntervalSet("interval shorter than D"));
    }
    let span_size = p.span().size();
    let path_len = p.intervals().len();
    let pieces = s123_count(p);
    let snap = snap_map(p, delta)?;
    let cert = BoundCertificate {
        span_size,
        d,
        delta,
        path_len,
        path_bound: 2.0 * span_size as f64 / d as f64,
        pieces,
        pieces_bound: 4.0 * span_size as f64 / d as f64,
        max_displacement: snap.max_displacement(),
    };
    if path_len as i64 * d > 2 * span_size {
        return Err(Error::CertificateViolation(format!("|I'| = {path_len} > 2|span|/D = {}", cert.path_bound)));
    }
    if pieces as i64 * d > 4 * span_size {
        return Err(Error::CertificateViolation(format!("|S| = {pieces} > 4|span|/D = {}", cert.pieces_bound)));
    }
    if cert.max_displacement > 2 * delta {
        return Err(Error::CertificateViolation(format!(
            "snap displacement {} > 2δ = {}",
            cert.max_displacement,
            2 * delta
        )));
    }
    Ok(cert)
}

/// Outcome of checking the interval lemma on many families.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub instances: u64,
    /// Instances with `D >= 1`, where a bound certificate applies.
    pub certified: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl SweepReport {
    fn record(&mut self, outcome: std::result::Result<bool, String>) {
        self.instances += 1;
        match outcome {
            Ok(c) => self.certified += c as u64,
            Err(msg) => {
                self.failures += 1;
                self.first_failure.get_or_insert(msg);
            }
        }
    }
}

/// Checks one family: the minimal path agrees with the oracle on hops,
/// bridges, interleaves and covers every point once or twice; when the
/// shortest path interval has `D >= 2`, the bound certificate at
/// `δ = D / 2` holds as well (only the counting bounds at `D = 1`).
/// Returns whether a certificate was checked.
pub fn check_lemma_instance(s: &IntervalSet) -> std::result::Result<bool, String> {
    let fail = |what: &str| Err(format!("{what}: {:?}", s.intervals()));
    let Ok(p) = minimal_bridge_path(s) else { return fail("no bridging path") };
    match oracle_bridge_path(s) {
        Ok(q) if q.hops() == p.hops() => {}
        Ok(_) => return fail("hop count differs from oracle"),
        Err(_) => return fail("oracle failed"),
    }
    if !p.bridges() || !p.endpoints_interleave() {
        return fail("path does not bridge");
    }
    if !p.has_cover_one_or_two() {
        return fail("cover multiplicity outside {1,2}");
    }
    let d = p.min_length();
    if d < 1 {
        return Ok(false);
    }
    if d == 1 {
        // no snap map at D = 1, only the counting bounds
        let span = p.span().size();
        if p.intervals().len() as i64 > 2 * span || s123_count(&p) as i64 > 4 * span {
            return fail("counting bound");
        }
        return Ok(true);
    }
    match bound_certificate(&p, d, d / 2) {
        Ok(_) => Ok(true),
        Err(e) => Err(format!("{e}: {:?}", s.intervals())),
    }
}

/// Every connected family of at most `max_count` distinct intervals with
/// endpoints in `[0, hi]`.
pub fn exhaustive_sweep(max_count: usize, hi: i64) -> SweepReport {
    let mut pool = Vec::new();
    for a in 0..=hi {
        for b in a..=hi {
            pool.push(Interval::new(a, b));
        }
    }
    // sorted by `lo`, so a family stays connected iff each new interval
    // starts at or before the reach of the ones already chosen
    fn go(pool: &[Interval], start: usize, reach: i64, k: usize, cur: &mut Vec<Interval>, rep: &mut SweepReport) {
        if !cur.is_empty() {
            let span = Interval::new(cur[0].lo, reach);
            let set = IntervalSet { intervals: cur.clone(), span };
            rep.record(check_lemma_instance(&set));
        }
        if cur.len() == k {
            return;
        }
        for (i, iv) in pool.iter().enumerate().skip(start) {
            if !cur.is_empty() && iv.lo > reach {
                break;
            }
            cur.push(*iv);
            go(pool, i + 1, reach.max(iv.hi), k, cur, rep);
            cur.pop();
        }
    }
    let mut rep = SweepReport::default();
    go(&pool, 0, i64::MIN, max_count, &mut Vec::with_capacity(max_count), &mut rep);
    rep
}

/// Checks the snap map at `delta` and the bound certificate at `(d, delta)`.
pub fn check_snap_instance(p: &IntervalPath, d: i64, delta: i64) -> std::result::Result<(), String> {
    let fail = |what: &str| Err(format!("{what}: {:?} at δ = {delta}", p.intervals()));
    let snap = match snap_map(p, delta) {
        Ok(s) => s,
        Err(e) => return fail(&e.to_string()),
    };
    if snap.max_displacement() > 2 * delta {
        return fail("displacement exceeds 2δ");
    }
    if !snap.is_monotone() {
        return fail("snap map not monotone");
    }
    if !snap.preserves_adjacency(p) {
        return fail("snap map breaks adjacency");
    }
    if !snap.image_multiplicity_ok(p) {
        return fail("image multiplicity above 2");
    }
    bound_certificate(p, d, delta).map(|_| ()).map_err(|e| format!("{e}: {:?}", p.intervals()))
}

/// `count` random chains of overlapping intervals drawn from `seed`, each
/// with a random `δ <= D / 2` where `D` is the shortest interval.
pub fn random_snap_sweep(count: usize, seed: u64) -> SweepReport {
    let stream = LabelField::new(seed).stream("snap-instances");
    let mut rep = SweepReport::default();
    for i in 0..count as u64 {
        // 64 draws per instance
        let draw = |j: u64, n: i64| ((stream.at(i * 64 + j) * n as f64) as i64).min(n - 1);
        let d = 2 + draw(0, 11);
        let len = 2 + draw(1, 9) as usize;
        let mut ivs = Vec::with_capacity(len);
        let mut lo = draw(2, 20);
        for k in 0..len as u64 {
            let hi = lo + d + draw(3 + 2 * k, 12);
            ivs.push(Interval::new(lo, hi));
            lo += draw(4 + 2 * k, hi - lo + 1);
        }
        let set = IntervalSet::from_intervals(ivs).expect("consecutive intervals overlap");
        let p = minimal_bridge_path(&set).expect("connected family");
        let dmin = p.min_length();
        let delta = 1 + draw(40, dmin / 2);
        rep.record(check_snap_instance(&p, dmin, delta).map(|_| true));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[(i64, i64)]) -> IntervalSet {
        IntervalSet::from_intervals(v.iter().map(|&p| p.into()).collect()).unwrap()
    }

    fn ivs(p: &IntervalPath) -> Vec<(i64, i64)> {
        p.intervals().iter().map(|i| (i.lo, i.hi)).collect()
    }

    #[test]
    fn three_chain() {
        let s = set(&[(0, 4), (3, 7), (6, 10)]);
        let p = minimal_bridge_path(&s).unwrap();
        assert_eq!(ivs(&p), vec![(0, 4), (3, 7), (6, 10)]);
        assert!(p.cover_multiplicities().iter().all(|&c| c <= 2));
        assert_eq!(oracle_bridge_path(&s).unwrap().hops(), 2);
        assert!(p.endpoints_interleave());
        assert_eq!(p.endpoint_labels(), vec![0, 3, 4, 6, 7, 10]);
    }

    #[test]
    fn single_and_covering() {
        let p = minimal_bridge_path(&set(&[(0, 10)])).unwrap();
        assert_eq!(p.hops(), 0);
        assert!(p.cover_multiplicities().iter().all(|&c| c == 1));
        let p = minimal_bridge_path(&set(&[(0, 6), (2, 8), (4, 10), (0, 10)])).unwrap();
        assert_eq!(ivs(&p), vec![(0, 10)]);
        let nested = set(&[(0, 10), (1, 9), (2, 8)]);
        assert_eq!(oracle_bridge_path(&nested).unwrap().hops(), 0);
    }

    #[test]
    fn unit_overlap_chain() {
        let k = 6;
        let s = set(&(0..k).map(|i| (3 * i, 3 * i + 3)).collect::<Vec<_>>());
        assert_eq!(oracle_bridge_path(&s).unwrap().hops(), k as usize - 1);
        assert_eq!(minimal_bridge_path(&s).unwrap().hops(), k as usize - 1);
    }

    #[test]
    fn invalid_sets() {
        let disconnected = IntervalSet::from_intervals(vec![(0, 2).into(), (4, 6).into()]);
        assert!(matches!(disconnected, Err(Error::InvalidIntervalSet(_))));
        let uncovered = IntervalSet::new(vec![(1, 5).into()], Interval::new(0, 5));
        assert!(uncovered.is_err());
        let big = set(&(0..13).map(|i| (i, i + 1)).collect::<Vec<_>>());
        assert_eq!(oracle_bridge_path(&big), Err(Error::OracleCap(13, 12)));
    }

    #[test]
    fn snap_example() {
        let p = minimal_bridge_path(&set(&[(0, 4), (3, 7), (6, 10)])).unwrap();
        let s = snap_map(&p, 2).unwrap();
        let expected: BTreeMap<i64, i64> = [(0, 0), (3, 2), (4, 4), (6, 6), (7, 6), (10, 10)].into();
        assert_eq!(s.assignments(), expected);
        assert!(s.is_monotone());
        assert!(s.max_displacement() <= 4);
        assert!(s.preserves_adjacency(&p) && s.image_multiplicity_ok(&p));
        assert_eq!(snap_map(&p, 3), Err(Error::DeltaTooLarge { delta: 3, min_len: 4 }));
    }

    #[test]
    fn snap_identity_on_grid() {
        let p = minimal_bridge_path(&set(&[(0, 8), (4, 12), (12, 20)])).unwrap();
        let s = snap_map(&p, 4).unwrap();
        assert_eq!(s.labels(), s.images());
    }

    #[test]
    fn snap_four_way_collision() {
        // overlaps [4,11] and [12,12] sit next to each other; with δ = 4 the labels
        // 11, 12, 12, 13 all round to 12
        let p = minimal_bridge_path(&set(&[(0, 11), (4, 12), (12, 20), (13, 21)])).unwrap();
        assert_eq!(p.hops(), 3);
        let s = snap_map(&p, 4).unwrap();
        assert!(s.is_monotone() && s.max_displacement() <= 8);
        assert!(s.preserves_adjacency(&p) && s.image_multiplicity_ok(&p));
    }

    #[test]
    fn snap_triple_with_occupied_upper_neighbour() {
        // labels 11, 12, 13 round to 12 and the next label 15 rounds to 16,
        // so lifting 13 would stack three snapped intervals on 16
        let p = minimal_bridge_path(&set(&[(0, 11), (5, 13), (12, 20), (15, 23)])).unwrap();
        let s = snap_map(&p, 4).unwrap();
        assert!(s.preserves_adjacency(&p) && s.image_multiplicity_ok(&p) && s.is_monotone());
    }

    #[test]
    fn snap_separates_ends_of_disjoint_intervals() {
        // 4 ends [0,4] and 5 starts [5,9]; both round to 4 with δ = 2, which
        // would put three snapped intervals on 4
        let p = minimal_bridge_path(&set(&[(0, 4), (1, 6), (5, 9)])).unwrap();
        let s = snap_map(&p, 2).unwrap();
        assert_eq!(s.repair, SnapRepair::Search);
        assert!(s.preserves_adjacency(&p) && s.image_multiplicity_ok(&p) && s.is_monotone());
        assert!(s.max_displacement() <= 4);
        assert_eq!(snap_map(&minimal_bridge_path(&set(&[(0, 4), (3, 7), (6, 10)])).unwrap(), 2).unwrap().repair, SnapRepair::Rounded);
    }

    #[test]
    fn s123_examples() {
        let single = minimal_bridge_path(&set(&[(0, 10)])).unwrap();
        let d = s123_decomposition(&single);
        assert_eq!(d.s1, vec![Interval::new(0, 10)]);
        assert!(d.s2.is_empty() && d.s3.is_empty());
        let p = minimal_bridge_path(&set(&[(0, 4), (3, 7), (6, 10)])).unwrap();
        let d = s123_decomposition(&p);
        assert_eq!(d.s2, vec![Interval::new(3, 4), Interval::new(6, 7)]);
        assert_eq!(d.s1, vec![Interval::new(0, 2), Interval::new(8, 10)]);
        assert_eq!(d.s3, vec![Interval::new(5, 5)]);
    }

    #[test]
    fn certificate_examples() {
        let p = minimal_bridge_path(&set(&[(0, 4), (3, 7), (6, 10)])).unwrap();
        let c = bound_certificate(&p, 4, 2).unwrap();
        assert_eq!(c.path_len, 3);
        assert_eq!(c.path_bound, 5.5);
        let single = minimal_bridge_path(&set(&[(0, 9)])).unwrap();
        for d in 2..=9 {
            assert!(bound_certificate(&single, d, d / 2).is_ok());
        }
        assert!(bound_certificate(&p, 5, 2).is_err());
    }

    #[test]
    fn sweeps_find_no_failures() {
        let small = exhaustive_sweep(3, 8);
        assert_eq!((small.failures, small.first_failure.clone()), (0, None));
        assert!(small.instances > 1000 && small.certified > 0);
        let r = random_snap_sweep(300, 9);
        assert_eq!((r.instances, r.failures, r.first_failure.clone()), (300, 0, None));
        assert_eq!(r, random_snap_sweep(300, 9));
    }
}
