//! Numerical monodromy of the eigenvalue sheets over `w = z^q`.
//!
//! Each loop moves one coordinate `w_j` around a circle through the base
//! point, carrying `z_j` along as a continuously unwrapped `q_j`-th root, and
//! tracks the `Q` eigenvalues of `D^z + B` by nearest-neighbour matching under
//! a gap condition. The permutation of the base eigenvalues induced by each
//! loop is recorded; their orbits bound the factor structure of `P`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::union_find::UnionFind;
use super::NumericFloquet;
use crate::error::{Error, Result};
use crate::model::OperatorModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MonodromyVerdict {
    Transitive,
    IntransitiveStable,
    Inconclusive,
}

impl MonodromyVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            MonodromyVerdict::Transitive => "TRANSITIVE",
            MonodromyVerdict::IntransitiveStable => "INTRANSITIVE_STABLE",
            MonodromyVerdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Debug)]
pub struct MonodromyConfig {
    pub loops: usize,
    pub seed: u64,
    /// Perturbed-loop retries per loop before giving up on it.
    pub retries: usize,
    pub max_steps: usize,
    /// Loops over which an intransitive partition must stay unchanged.
    pub stable_loops: usize,
    pub initial_step: f64,
    pub max_step: f64,
    pub min_step: f64,
    /// Stop as soon as a single orbit is reached.
    pub stop_when_transitive: bool,
}

impl Default for MonodromyConfig {
    fn default() -> Self {
        MonodromyConfig {
            loops: 32,
            seed: 0,
            retries: 10,
            max_steps: 10_000,
            stable_loops: 8,
            initial_step: 1.0 / 64.0,
            max_step: 1.0 / 16.0,
            min_step: 1e-9,
            stop_when_transitive: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoopRecord {
    /// 1-based coordinate moved by the loop.
    pub coordinate: usize,
    pub center: [f64; 2],
    pub radius: f64,
    pub steps: usize,
    pub rejected_steps: usize,
    pub retries: usize,
    /// 1-based image of each base sheet, `None` when the loop failed.
    pub permutation: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    pub min_gap: f64,
    pub total_steps: usize,
    pub total_retries: usize,
    pub failed_loops: usize,
    pub loops: Vec<LoopRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonodromyReport {
    pub base_point: Vec<[f64; 2]>,
    pub base_eigenvalues: Vec<[f64; 2]>,
    pub loop_count: usize,
    pub permutations: Vec<Vec<usize>>,
    pub orbits: Vec<Vec<usize>>,
    pub verdict: MonodromyVerdict,
    pub diagnostics: Diagnostics,
    pub seed: u64,
    pub note: &'static str,
}

const NOTE: &str = "TRANSITIVE is numerical evidence, not proof, that the lifted characteristic \
polynomial is irreducible (it is monic in lambda up to sign, so every factor has positive \
lambda-degree and is a union of monodromy orbits); INTRANSITIVE_STABLE is evidence of reducibility.";

impl MonodromyReport {
    pub fn to_json_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn min_gap(values: &[Complex64]) -> f64 {
    let mut g = f64::INFINITY;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            g = g.min((values[i] - values[j]).norm());
        }
    }
    g
}

/// Nearest-neighbour assignment of `next` to `prev`, accepted only when it is
/// a bijection and every displacement is below a third of the gap of `prev`.
fn match_step(prev: &[Complex64], next: &[Complex64]) -> Option<(Vec<usize>, f64)> {
    let gap = min_gap(prev);
    let mut used = vec![false; next.len()];
    let mut assign = Vec::with_capacity(prev.len());
    let mut worst: f64 = 0.0;
    for p in prev {
        let (j, d) = next
            .iter()
            .enumerate()
            .map(|(j, v)| (j, (v - p).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        if used[j] {
            return None;
        }
        used[j] = true;
        worst = worst.max(d);
        assign.push(j);
    }
    if prev.len() > 1 && !(3.0 * worst < gap) {
        return None;
    }
    Some((assign, worst))
}

struct Circle {
    coordinate: usize,
    center: Complex64,
    start: Complex64,
}

impl Circle {
    fn at(&self, t: f64) -> Complex64 {
        self.center + (self.start - self.center) * Complex64::from_polar(1.0, TAU * t)
    }
}

struct Tracked {
    permutation: Vec<usize>,
    steps: usize,
    rejected: usize,
    min_gap: f64,
}

enum TrackError {
    Stalled { steps: usize, rejected: usize },
    Numeric(Error),
}

struct Tracker<'a> {
    nf: &'a NumericFloquet,
    q: Vec<u32>,
    base_z: Vec<Complex64>,
    base_eigs: Vec<Complex64>,
    base_gap: f64,
    config: &'a MonodromyConfig,
}

impl Tracker<'_> {
    fn track(&self, circle: &Circle) -> std::result::Result<Tracked, TrackError> {
        let j = circle.coordinate;
        let qj = self.q[j] as f64;
        let mut z = self.base_z.clone();
        let mut w_prev = circle.start;
        let mut arg = 0.0f64; // unwrapped arg(w(t) / w(0))
        let (r0, arg0) = (circle.start.norm(), circle.start.arg());
        let mut t = 0.0f64;
        let mut h = self.config.initial_step;
        let mut current = self.base_eigs.clone();
        let (mut steps, mut rejected) = (0usize, 0usize);
        let mut seen_gap = self.base_gap;
        while t < 1.0 {
            if steps + rejected >= self.config.max_steps {
                return Err(TrackError::Stalled { steps, rejected });
            }
            let step = h.min(1.0 - t);
            let t_next = if step >= 1.0 - t { 1.0 } else { t + step };
            let w_next = circle.at(t_next);
            let arg_next = arg + (w_next / w_prev).arg();
            let modulus = w_next.norm() / r0;
            z[j] = Complex64::from_polar(r0.powf(1.0 / qj) * modulus.powf(1.0 / qj), (arg0 + arg_next) / qj);
            let next = self.nf.spectrum_at(&z).map_err(TrackError::Numeric)?;
            match match_step(&current, &next) {
                Some((assign, _)) => {
                    current = assign.iter().map(|&k| next[k]).collect();
                    seen_gap = seen_gap.min(min_gap(&current));
                    t = t_next;
                    w_prev = w_next;
                    arg = arg_next;
                    steps += 1;
                    h = (h * 1.5).min(self.config.max_step);
                }
                None => {
                    rejected += 1;
                    h *= 0.5;
                    if h < self.config.min_step {
                        return Err(TrackError::Stalled { steps, rejected });
                    }
                }
            }
        }
        // current[i] continues base sheet i; identify it among the base values
        let permutation = match match_step(&self.base_eigs, &current) {
            Some((assign, worst)) if worst < self.base_gap / 3.0 => assign,
            _ => return Err(TrackError::Stalled { steps, rejected }),
        };
        Ok(Tracked {
            permutation,
            steps,
            rejected,
            min_gap: seen_gap,
        })
    }
}

fn circle_through(coordinate: usize, start: Complex64, u: Complex64, s: f64) -> Circle {
    let normal = Complex64::new(0.0, 1.0) * (u - start);
    Circle {
        coordinate,
        center: (start + u) * 0.5 + normal * s,
        start,
    }
}

/// Draws loops for one coordinate. Most loops come in pairs that run just
/// outside and just inside a scanned near-collision (hints are visited in
/// turn), so their permutations differ by the local monodromy there. The rest
/// pass through a point whose modulus is log-uniform over eight decades, or
/// are centred near the origin.
struct LoopPlanner {
    hints: Vec<Hint>,
    next_hint: usize,
    pending: Option<Circle>,
}

impl LoopPlanner {
    fn new(hints: Vec<Hint>, rng: &mut ChaCha8Rng) -> Self {
        let next_hint = if hints.is_empty() {
            0
        } else {
            rng.random_range(0..hints.len())
        };
        LoopPlanner {
            hints,
            next_hint,
            pending: None,
        }
    }

    fn next(&mut self, rng: &mut ChaCha8Rng, coordinate: usize, start: Complex64, retry: bool) -> Circle {
        if retry {
            self.pending = None;
        } else if let Some(c) = self.pending.take() {
            return c;
        }
        let roll: f64 = rng.random();
        if !self.hints.is_empty() && roll < 0.7 {
            let hint = &self.hints[self.next_hint % self.hints.len()];
            self.next_hint += 1;
            let s = rng.random_range(-1.0..1.0);
            let through = circle_through(coordinate, start, hint.point, s);
            let outward = (hint.point - through.center) / (hint.point - through.center).norm();
            let eps = hint.spacing * rng.random_range(0.1..0.4);
            let outer = circle_through(coordinate, start, hint.point + outward * eps, s);
            let inner = circle_through(coordinate, start, hint.point - outward * eps, s);
            self.pending = Some(inner);
            outer
        } else if roll < 0.85 {
            let u = Complex64::from_polar(
                start.norm() * 10f64.powf(rng.random_range(-4.0..4.0)),
                rng.random_range(0.0..TAU),
            );
            circle_through(coordinate, start, u, rng.random_range(-1.0..1.0))
        } else {
            Circle {
                coordinate,
                center: start * Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)),
                start,
            }
        }
    }
}

const SCAN_DECADES: f64 = 6.0;
const SCAN_RADII: usize = 97;
const SCAN_ANGLES: usize = 64;
const ZOOM_POINTS: usize = 15;
const ZOOM_DEPTH: usize = 3;
const MAX_HINTS: usize = 48;

/// Approximate branch point, with the distance to the nearest other one
/// (capped at a fifth of its modulus).
struct Hint {
    point: Complex64,
    spacing: f64,
}

/// Relative eigenvalue gap on a log-polar grid in `w_j`: `grid[a][b]` is the
/// value at `log|w| = l0 + a dl`, `arg w = t0 + b dt`. Non-finite spectra
/// count as no minimum.
fn gap_grid(
    nf: &NumericFloquet,
    q: &[u32],
    base_z: &[Complex64],
    j: usize,
    (l0, dl, nl): (f64, f64, usize),
    (t0, dt, nt): (f64, f64, usize),
) -> Result<Vec<Vec<f64>>> {
    let qj = q[j] as f64;
    let mut z = base_z.to_vec();
    let mut grid = vec![vec![f64::INFINITY; nt]; nl];
    for (a, row) in grid.iter_mut().enumerate() {
        let log_r = l0 + dl * a as f64;
        for (b, cell) in row.iter_mut().enumerate() {
            let theta = t0 + dt * b as f64;
            z[j] = Complex64::from_polar((log_r / qj).exp(), theta / qj);
            match nf.spectrum_at(&z) {
                Ok(eigs) => {
                    let scale = 1.0 + eigs.iter().map(|v| v.norm()).fold(0.0, f64::max);
                    *cell = min_gap(&eigs) / scale;
                }
                Err(Error::NumericFailure(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(grid)
}

/// Strict local minima over the 8-neighbourhood, radial edges excluded.
fn grid_minima(grid: &[Vec<f64>], wrap: bool) -> Vec<(usize, usize, f64)> {
    let (nl, nt) = (grid.len(), grid[0].len());
    let mut out = Vec::new();
    for a in 1..nl - 1 {
        for b in 0..nt {
            if !wrap && (b == 0 || b == nt - 1) {
                continue;
            }
            let g = grid[a][b];
            if !g.is_finite() {
                continue;
            }
            let lowest = (a - 1..=a + 1).all(|aa| {
                (0..3).all(|db| {
                    let bb = (b + nt + db - 1) % nt;
                    (aa, bb) == (a, b) || grid[aa][bb] > g
                })
            });
            if lowest {
                out.push((a, b, g));
            }
        }
    }
    out
}

/// Near-collisions of the spectrum as `w_j` varies with the other
/// coordinates at the base point. A coarse log-polar scan over twelve
/// decades around `|start|` finds local minima of the relative gap; each is
/// refined by repeated zooming so that close pairs of branch points separate.
fn scan_near_collisions(
    nf: &NumericFloquet,
    q: &[u32],
    base_z: &[Complex64],
    j: usize,
    start: Complex64,
) -> Result<Vec<Hint>> {
    let dl = 2.0 * SCAN_DECADES * std::f64::consts::LN_10 / (SCAN_RADII - 1) as f64;
    let dt = TAU / SCAN_ANGLES as f64;
    let l0 = start.norm().ln() - SCAN_DECADES * std::f64::consts::LN_10;
    let coarse = gap_grid(nf, q, base_z, j, (l0, dl, SCAN_RADII), (0.0, dt, SCAN_ANGLES))?;
    let mut minima = grid_minima(&coarse, true);
    minima.sort_by(|x, y| x.2.total_cmp(&y.2));
    let mut frontier: Vec<(f64, f64, f64)> = minima
        .into_iter()
        .take(MAX_HINTS / 2)
        .map(|(a, b, g)| (l0 + dl * a as f64, dt * b as f64, g))
        .collect();
    let (mut wl, mut wt) = (2.0 * dl, 2.0 * dt);
    for _ in 0..ZOOM_DEPTH {
        let mut next = Vec::new();
        let (sl, st) = (
            2.0 * wl / (ZOOM_POINTS - 1) as f64,
            2.0 * wt / (ZOOM_POINTS - 1) as f64,
        );
        for &(lc, tc, g) in &frontier {
            let grid = gap_grid(
                nf,
                q,
                base_z,
                j,
                (lc - wl, sl, ZOOM_POINTS),
                (tc - wt, st, ZOOM_POINTS),
            )?;
            let found = grid_minima(&grid, false);
            if found.is_empty() {
                next.push((lc, tc, g));
            }
            next.extend(
                found
                    .into_iter()
                    .map(|(a, b, g)| (lc - wl + sl * a as f64, tc - wt + st * b as f64, g)),
            );
        }
        next.sort_by(|x, y| x.2.total_cmp(&y.2));
        next.truncate(MAX_HINTS);
        frontier = next;
        wl = 2.0 * sl;
        wt = 2.0 * st;
    }
    let mut points: Vec<Complex64> = Vec::new();
    for (l, t, _) in frontier {
        let w = Complex64::from_polar(l.exp(), t);
        if points.iter().all(|p| (p - w).norm() > 1e-2 * w.norm()) {
            points.push(w);
        }
    }
    Ok(points
        .iter()
        .map(|&w| {
            let nearest = points
                .iter()
                .filter(|&&p| p != w)
                .map(|p| (p - w).norm())
                .fold(0.2 * w.norm(), f64::min);
            Hint {
                point: w,
                spacing: nearest,
            }
        })
        .collect())
}

pub fn monodromy_run(model: &OperatorModel, loops: usize, seed: u64) -> Result<MonodromyReport> {
    monodromy_run_with(
        model,
        &MonodromyConfig {
            loops,
            seed,
            ..MonodromyConfig::default()
        },
    )
}

pub fn monodromy_run_with(model: &OperatorModel, config: &MonodromyConfig) -> Result<MonodromyReport> {
    if config.loops == 0 {
        return Err(Error::InvalidModel("monodromy needs at least one loop".into()));
    }
    let nf = NumericFloquet::new(model)?;
    let q = model.q().to_vec();
    let d = q.len();
    let big_q = nf.cells();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    // base point: unit circle with seeded noise, re-drawn if degenerate
    let mut attempt = 0;
    let (base_w, base_z, base_eigs) = loop {
        let w: Vec<Complex64> = (0..d)
            .map(|_| Complex64::from_polar(1.0 + rng.random_range(-0.1..0.1), rng.random_range(0.0..TAU)))
            .collect();
        let z: Vec<Complex64> = w
            .iter()
            .zip(&q)
            .map(|(wj, &qj)| Complex64::from_polar(wj.norm().powf(1.0 / qj as f64), wj.arg() / qj as f64))
            .collect();
        let eigs = nf.spectrum_at(&z)?;
        let scale = 1.0 + eigs.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if min_gap(&eigs) > 1e-6 * scale || attempt >= config.retries {
            break (w, z, eigs);
        }
        attempt += 1;
    };
    let base_gap = min_gap(&base_eigs);
    let mut uf = UnionFind::new(big_q);
    let mut records = Vec::new();
    let mut permutations = Vec::new();
    let mut history: Vec<Vec<Vec<usize>>> = Vec::new();
    let (mut total_steps, mut total_retries, mut failed) = (0usize, 0usize, 0usize);
    let mut gap_seen = base_gap;
    let scale = 1.0 + base_eigs.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let base_degenerate = big_q > 1 && base_gap <= 1e-6 * scale;

    if big_q > 1 && !base_degenerate {
        let tracker = Tracker {
            nf: &nf,
            q: q.clone(),
            base_z: base_z.clone(),
            base_eigs: base_eigs.clone(),
            base_gap,
            config,
        };
        let mut planners = Vec::with_capacity(d);
        for j in 0..d {
            let hints = scan_near_collisions(&nf, &q, &base_z, j, base_w[j])?;
            planners.push(LoopPlanner::new(hints, &mut rng));
        }
        for index in 0..config.loops {
            let coordinate = index % d;
            let mut retries = 0;
            let record = loop {
                let circle = planners[coordinate].next(&mut rng, coordinate, base_w[coordinate], retries > 0);
                let outcome = tracker.track(&circle);
                let mut record = LoopRecord {
                    coordinate: coordinate + 1,
                    center: pair(circle.center),
                    radius: (circle.start - circle.center).norm(),
                    steps: 0,
                    rejected_steps: 0,
                    retries,
                    permutation: None,
                };
                match outcome {
                    Ok(tracked) => {
                        record.steps = tracked.steps;
                        record.rejected_steps = tracked.rejected;
                        record.permutation = Some(tracked.permutation.iter().map(|i| i + 1).collect());
                        gap_seen = gap_seen.min(tracked.min_gap);
                        uf.absorb_permutation(&tracked.permutation);
                        permutations.push(tracked.permutation.iter().map(|i| i + 1).collect());
                        history.push(uf.classes());
                        break record;
                    }
                    Err(TrackError::Stalled { steps, rejected }) => {
                        record.steps = steps;
                        record.rejected_steps = rejected;
                        if retries >= config.retries {
                            failed += 1;
                            break record;
                        }
                        retries += 1;
                        total_steps += steps;
                    }
                    Err(TrackError::Numeric(e)) => return Err(e),
                }
            };
            total_steps += record.steps;
            total_retries += record.retries;
            records.push(record);
            if config.stop_when_transitive && uf.classes().len() == 1 {
                break;
            }
        }
    }

    let orbits: Vec<Vec<usize>> = uf
        .classes()
        .into_iter()
        .map(|c| c.into_iter().map(|i| i + 1).collect())
        .collect();
    let verdict = if orbits.len() == 1 {
        MonodromyVerdict::Transitive
    } else if base_degenerate || history.len() <= config.stable_loops {
        MonodromyVerdict::Inconclusive
    } else {
        let last = history.last().expect("nonempty");
        if history[history.len() - 1 - config.stable_loops] == *last {
            MonodromyVerdict::IntransitiveStable
        } else {
            MonodromyVerdict::Inconclusive
        }
    };
    Ok(MonodromyReport {
        base_point: base_w.iter().copied().map(pair).collect(),
        base_eigenvalues: base_eigs.iter().copied().map(pair).collect(),
        loop_count: records.len(),
        permutations,
        orbits,
        verdict,
        diagnostics: Diagnostics {
            min_gap: if gap_seen.is_finite() { gap_seen } else { 0.0 },
            total_steps,
            total_retries,
            failed_loops: failed,
            loops: records,
        },
        seed: config.seed,
        note: NOTE,
    })
}

/// Re-tracks one recorded loop with the given step bounds; used to check that
/// permutations do not depend on step size.
pub fn retrack_loop(
    model: &OperatorModel,
    report: &MonodromyReport,
    index: usize,
    config: &MonodromyConfig,
) -> Result<Option<Vec<usize>>> {
    let nf = NumericFloquet::new(model)?;
    let q = model.q().to_vec();
    let base_w: Vec<Complex64> = report
        .base_point
        .iter()
        .map(|p| Complex64::new(p[0], p[1]))
        .collect();
    let base_z: Vec<Complex64> = base_w
        .iter()
        .zip(&q)
        .map(|(wj, &qj)| Complex64::from_polar(wj.norm().powf(1.0 / qj as f64), wj.arg() / qj as f64))
        .collect();
    let base_eigs = nf.spectrum_at(&base_z)?;
    let record = &report.diagnostics.loops[index];
    let coordinate = record.coordinate - 1;
    let tracker = Tracker {
        nf: &nf,
        q,
        base_gap: min_gap(&base_eigs),
        base_z,
        base_eigs,
        config,
    };
    let circle = Circle {
        coordinate,
        center: Complex64::new(record.center[0], record.center[1]),
        start: base_w[coordinate],
    };
    match tracker.track(&circle) {
        Ok(t) => Ok(Some(t.permutation.iter().map(|i| i + 1).collect())),
        Err(TrackError::Stalled { .. }) => Ok(None),
        Err(TrackError::Numeric(e)) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::FloquetSystem;
    use crate::model::{GaussianRational, Preset};
    use crate::oracle::{match_points, polynomial_roots};
    use std::collections::BTreeMap;

    fn decoupled() -> OperatorModel {
        let mut hop = BTreeMap::new();
        hop.insert(vec![2], GaussianRational::from_integers(-1, 0));
        hop.insert(vec![-2], GaussianRational::from_integers(-1, 0));
        OperatorModel::new(
            vec![2],
            hop,
            vec![
                GaussianRational::from_integers(1, 0),
                GaussianRational::from_integers(-2, 0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn free_chain_is_transitive() {
        let m = OperatorModel::preset_free(Preset::Square(1), vec![2]).unwrap();
        let r = monodromy_run(&m, 32, 1).unwrap();
        assert_eq!(r.verdict, MonodromyVerdict::Transitive);
        assert_eq!(r.orbits, vec![vec![1, 2]]);
    }

    #[test]
    fn decoupled_chain_is_intransitive() {
        let r = monodromy_run(&decoupled(), 32, 4).unwrap();
        assert_eq!(r.verdict, MonodromyVerdict::IntransitiveStable);
        assert_eq!(r.orbits, vec![vec![1], vec![2]]);
        assert_eq!(r.loop_count, 32);
        assert!(r.permutations.iter().all(|p| p == &vec![1, 2]));
    }

    #[test]
    fn single_cell_is_trivially_transitive() {
        let m = OperatorModel::preset_free(Preset::Square(2), vec![1, 1]).unwrap();
        let r = monodromy_run(&m, 4, 0).unwrap();
        assert_eq!(r.verdict, MonodromyVerdict::Transitive);
        assert_eq!(r.orbits, vec![vec![1]]);
        assert_eq!(r.loop_count, 0);
    }

    #[test]
    fn zero_loops_rejected() {
        let m = OperatorModel::preset_free(Preset::Square(1), vec![2]).unwrap();
        assert!(monodromy_run(&m, 0, 0).is_err());
    }

    #[test]
    fn seeded_runs_are_identical() {
        let m = OperatorModel::from_preset(
            Preset::Triangular,
            vec![2, 2],
            vec![
                GaussianRational::from_integers(1, 1),
                GaussianRational::from_integers(0, -1),
                GaussianRational::from_integers(2, 0),
                GaussianRational::from_integers(-1, 0),
            ],
        )
        .unwrap();
        let a = monodromy_run(&m, 12, 7).unwrap();
        let b = monodromy_run(&m, 12, 7).unwrap();
        assert_eq!(a.to_json_pretty(), b.to_json_pretty());
    }

    #[test]
    fn halving_the_step_keeps_permutations() {
        let m = OperatorModel::from_preset(
            Preset::Square(2),
            vec![2, 2],
            vec![
                GaussianRational::from_integers(1, 0),
                GaussianRational::from_integers(0, 2),
                GaussianRational::from_integers(-1, 1),
                GaussianRational::from_integers(3, 0),
            ],
        )
        .unwrap();
        let config = MonodromyConfig {
            loops: 6,
            seed: 3,
            stop_when_transitive: false,
            ..MonodromyConfig::default()
        };
        let r = monodromy_run_with(&m, &config).unwrap();
        let finer = MonodromyConfig {
            initial_step: config.initial_step / 2.0,
            max_step: config.max_step / 2.0,
            ..config.clone()
        };
        for (i, rec) in r.diagnostics.loops.iter().enumerate() {
            if let Some(p) = &rec.permutation {
                assert_eq!(retrack_loop(&m, &r, i, &finer).unwrap().as_ref(), Some(p));
            }
        }
    }

    #[test]
    fn report_orbits_match_recorded_permutations() {
        let m = OperatorModel::from_preset(
            Preset::ExtendedHarper,
            vec![2, 2],
            vec![
                GaussianRational::from_integers(2, 1),
                GaussianRational::from_integers(0, 0),
                GaussianRational::from_integers(-1, 0),
                GaussianRational::from_integers(1, -3),
            ],
        )
        .unwrap();
        let r = monodromy_run(&m, 16, 11).unwrap();
        let mut uf = UnionFind::new(4);
        for p in &r.permutations {
            let zero: Vec<usize> = p.iter().map(|i| i - 1).collect();
            uf.absorb_permutation(&zero);
        }
        let expect: Vec<Vec<usize>> = uf
            .classes()
            .into_iter()
            .map(|c| c.into_iter().map(|i| i + 1).collect())
            .collect();
        assert_eq!(r.orbits, expect);
    }

    #[test]
    fn base_eigenvalues_are_roots_of_lifted_polynomial() {
        let m = OperatorModel::from_preset(
            Preset::Triangular,
            vec![2, 3],
            (0..6)
                .map(|i| GaussianRational::from_integers(i - 2, (i % 3) - 1))
                .collect(),
        )
        .unwrap();
        let r = monodromy_run(&m, 1, 5).unwrap();
        let mut sys = FloquetSystem::new(&m).unwrap();
        let lifted = sys.lift_char().unwrap().clone();
        let w: Vec<Complex64> = r.base_point.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        let coeffs: Vec<Complex64> = (0..=6)
            .map(|k| lifted.lambda_coefficient(k).to_complex_poly().eval(&w).unwrap())
            .collect();
        let roots = polynomial_roots(&coeffs).unwrap();
        let base: Vec<Complex64> = r
            .base_eigenvalues
            .iter()
            .map(|p| Complex64::new(p[0], p[1]))
            .collect();
        let (_, worst) = match_points(&roots, &base);
        assert!(worst < 1e-8, "{worst:e}");
    }
}
