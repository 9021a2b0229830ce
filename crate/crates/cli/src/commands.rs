//! The five experiment commands. Each returns a report whose violations
//! decide the exit status.

use fiid_forest::forest::{build_one_ended_tree, end_proxy_stats, BuildConfig};
use fiid_forest::graph::{is_connected, is_spanning_tree, VertexId};
use fiid_forest::interval::{exhaustive_sweep, random_snap_sweep, ORACLE_CAP};
use fiid_forest::labels::LabelField;
use fiid_forest::replicas::{map_seeds, seed_range, Mode};
use fiid_forest::stats::{estimate, mtp_check, received_mass, NeighborRule};
use fiid_forest::substrates::{make_window, snake_tree, SubstrateKind, SubstrateSpec};
use fiid_forest::trunk::{bernoulli_connectors, lift_to_g, marginal_bound_check, quotient_graph, ratio_profile_replicas, ConnectorRule};
use fiid_forest::{Error, Result};

use crate::report::{f, Report};

/// Fully resolved run parameters; defaults already applied per command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub substrate: SubstrateKind,
    pub side: usize,
    pub margin: Option<usize>,
    pub pendant: bool,
    pub seed: u64,
    pub seeds: usize,
    pub eps: f64,
    pub max_stage: Option<usize>,
    pub ns: Vec<usize>,
    pub split_gap: usize,
    pub max_intervals: usize,
    pub span_max: i64,
    pub mode: Mode,
}

impl RunConfig {
    fn spec(&self) -> SubstrateSpec {
        SubstrateSpec { kind: self.substrate, side: self.side, margin: self.margin }
    }

    fn replica_seeds(&self) -> Vec<u64> {
        seed_range(self.seed, self.seeds)
    }

    /// Stages `1 ..= max_stage` for the trunk commands.
    fn stages(&self) -> Vec<u32> {
        (1..=self.max_stage.unwrap_or(6) as u32).collect()
    }
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or("-".to_string(), |v| v.to_string())
}

pub fn build_tree(cfg: &RunConfig) -> Result<Report> {
    if !cfg.substrate.is_2d() {
        return Err(Error::InvalidSubstrate("build-tree needs grid2d or torus2d".into()));
    }
    let w = make_window(&cfg.spec())?;
    let bc = BuildConfig { eps: cfg.eps, max_stage: cfg.max_stage };
    let seeds = cfg.replica_seeds();
    let runs = map_seeds(&seeds, cfg.mode, |s| {
        let b = build_one_ended_tree(&w, &LabelField::new(s), &bc)?;
        let proxy = end_proxy_stats(&w, &b.tree, &b.state)?;
        Ok((s, is_spanning_tree(&w, &b.tree), b.report, proxy.p99, proxy.mean))
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;

    let mut r = Report::new(&["check", "seed", "n", "k", "m", "value", "bound", "holds"]);
    let mut spanning = 0;
    for (s, ok, rep, p99, _) in &runs {
        spanning += *ok as usize;
        r.require(*ok, "spanning-tree");
        r.row(vec!["spanning-tree".into(), s.to_string(), "-".into(), "-".into(), "-".into(), (*ok as u8).to_string(), "1".into(), ok.to_string()]);
        for st in &rep.stages {
            let holds = st.connectivity >= st.bound;
            r.require(holds, "stage-connectivity>=1-2^-n");
            r.row(vec![
                "stage-connectivity>=1-2^-n".into(),
                s.to_string(),
                st.n.to_string(),
                st.k.to_string(),
                opt(st.m),
                f(st.connectivity),
                f(st.bound),
                holds.to_string(),
            ]);
        }
        r.row(vec!["closure-edges".into(), s.to_string(), "-".into(), "-".into(), "-".into(), rep.closure_edges.to_string(), "-".into(), "-".into()]);
        r.row(vec!["end-proxy-p99".into(), s.to_string(), "-".into(), "-".into(), "-".into(), p99.to_string(), "-".into(), "-".into()]);
    }
    // replica averages per stage
    let depth = runs.iter().map(|x| x.2.stages.len()).max().unwrap_or(0);
    for n in 0..depth {
        let vals: Vec<f64> = runs.iter().filter_map(|x| x.2.stages.get(n)).map(|st| st.connectivity).collect();
        let e = estimate(&vals)?;
        let bound = 1.0 - 0.5f64.powi(n as i32);
        let holds = e.mean >= bound - 3.0 * e.se_or_zero();
        r.require(holds, "mean-stage-connectivity>=1-2^-n-3se");
        r.row(vec![
            "mean-stage-connectivity>=1-2^-n-3se".into(),
            format!("all({})", vals.len()),
            n.to_string(),
            "-".into(),
            "-".into(),
            f(e.mean),
            f(bound),
            holds.to_string(),
        ]);
    }
    let closure = estimate(&runs.iter().map(|x| x.2.closure_edges as f64).collect::<Vec<_>>())?;
    let p99 = estimate(&runs.iter().map(|x| x.3 as f64).collect::<Vec<_>>())?;
    r.note("vertices", w.len());
    r.note("spanning trees", format!("{spanning}/{}", runs.len()));
    r.note("closure edges (mean)", f(closure.mean));
    r.note("closure fraction of |V|", f(closure.mean / w.len() as f64));
    r.note("end-proxy p99 (mean)", f(p99.mean));
    Ok(r)
}

pub fn verify_lemma2(cfg: &RunConfig) -> Result<Report> {
    if cfg.max_intervals == 0 || cfg.max_intervals > ORACLE_CAP {
        return Err(Error::OracleCap(cfg.max_intervals, ORACLE_CAP));
    }
    if cfg.span_max < 0 {
        return Err(Error::InvalidIntervalSet("negative span"));
    }
    let ex = exhaustive_sweep(cfg.max_intervals, cfg.span_max);
    let rnd = random_snap_sweep(cfg.seeds, cfg.seed);
    let mut r = Report::new(&["check", "instances", "certified", "failures"]);
    r.row(vec!["bridge-path=oracle;cover-in-{1|2};certificate".into(), ex.instances.to_string(), ex.certified.to_string(), ex.failures.to_string()]);
    r.row(vec!["snap-map(displacement;monotone;adjacency;multiplicity);certificate".into(), rnd.instances.to_string(), rnd.instances.to_string(), rnd.failures.to_string()]);
    r.require(ex.failures == 0, "interval-lemma-exhaustive");
    r.require(rnd.failures == 0, "snap-map-random");
    r.note("exhaustive", format!("instances: {}, failures: {}", ex.instances, ex.failures));
    r.note("random snap", format!("instances: {}, failures: {}", rnd.instances, rnd.failures));
    for (name, rep) in [("exhaustive", &ex), ("random snap", &rnd)] {
        if let Some(msg) = &rep.first_failure {
            r.note(&format!("{name} first failure"), msg);
        }
    }
    Ok(r)
}

pub fn distance_profile(cfg: &RunConfig) -> Result<Report> {
    let w = make_window(&cfg.spec())?;
    let t = snake_tree(&w, cfg.pendant)?;
    let q = quotient_graph(&w, &t, &LabelField::new(cfg.seed))?;
    let prof = ratio_profile_replicas(&q, &cfg.ns, &cfg.replica_seeds(), cfg.mode)?;
    let mut r = Report::new(&["check", "n", "ratio", "se", "replicas", "holds"]);
    for (n, e) in &prof {
        let holds = e.mean > 0.0 && e.mean <= 1.0;
        r.require(holds, "0<dist(x-n,xn)/2n<=1");
        r.row(vec!["dist(x-n,xn)/2n".into(), n.to_string(), f(e.mean), f(e.se_or_zero()), e.n.to_string(), holds.to_string()]);
    }
    if let (Some(a), Some(b)) = (prof.first(), prof.last()) {
        r.note(&format!("ratio(n={})/ratio(n={})", b.0, a.0), f(b.1.mean / a.1.mean));
    }
    r.note("quotient vertices", q.len());
    Ok(r)
}

pub fn trunk_demo(cfg: &RunConfig) -> Result<Report> {
    if !cfg.substrate.is_2d() {
        return Err(Error::InvalidSubstrate("trunk-demo needs grid2d or torus2d".into()));
    }
    let w = make_window(&cfg.spec())?;
    let t = snake_tree(&w, cfg.pendant)?;
    let q = quotient_graph(&w, &t, &LabelField::new(cfg.seed))?;
    let seeds = cfg.replica_seeds();
    let mut r = Report::new(&[
        "check", "n", "lhs", "lhs_se", "rhs", "rhs_se", "head", "tail", "lift_marginal", "lifts_connected", "degenerate", "holds",
    ]);
    let mut prev: Option<(f64, f64)> = None;
    for n in cfg.stages() {
        let b = marginal_bound_check(&q, n, cfg.split_gap, &seeds, cfg.mode)?;
        // lift K_n back to G for each replica
        let lifts = map_seeds(&seeds, cfg.mode, |s| match bernoulli_connectors(&q, n, &LabelField::new(s)) {
            Ok(cs) => {
                let h = lift_to_g(&cs, &q, &t, &w);
                Ok(Some((h.vertex_count() as f64 / w.len() as f64, is_connected(&w, &h))))
            }
            Err(Error::DegenerateSample(_)) => Ok(None),
            Err(e) => Err(e),
        });
        let lifts: Vec<(f64, bool)> = lifts.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect();
        let connected = lifts.iter().filter(|x| x.1).count();
        let marginal = lifts.iter().map(|x| x.0).sum::<f64>() / lifts.len().max(1) as f64;
        r.require(connected == lifts.len(), "lift-of-K_n-connected");
        r.require(b.holds(), "P(o in K_n)<=2E[dist(o,o+)/(o+-o)]");
        if let Some((m0, se0)) = prev {
            let tol = 3.0 * (se0 * se0 + b.lhs.se_or_zero().powi(2)).sqrt();
            r.require(b.lhs.mean <= m0 + tol, "P(o in K_n)-nonincreasing");
        }
        prev = Some((b.lhs.mean, b.lhs.se_or_zero()));
        r.row(vec![
            "P(o in K_n)<=2E[dist(o,o+)/(o+-o)]".into(),
            n.to_string(),
            f(b.lhs.mean),
            f(b.lhs.se_or_zero()),
            f(b.rhs.mean),
            f(b.rhs.se_or_zero()),
            f(b.head.mean),
            f(b.tail.mean),
            f(marginal),
            format!("{connected}/{}", lifts.len()),
            b.degenerate.to_string(),
            b.holds().to_string(),
        ]);
    }
    r.note("quotient vertices", q.len());
    r.note("split gap M", cfg.split_gap);
    Ok(r)
}

pub fn mtp(cfg: &RunConfig) -> Result<Report> {
    let w = make_window(&cfg.spec())?;
    let t = snake_tree(&w, cfg.pendant)?;
    let mut r = Report::new(&["check", "seed", "n", "mass_out", "mass_in", "rel_err", "holds"]);
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    let (a, b) = mtp_check(&w, &NeighborRule)?;
    let holds = rel(a, b) <= 1e-9;
    r.require(holds, "mtp-relative-error<=1e-9");
    r.row(vec!["mtp neighbor-rule".into(), "-".into(), "-".into(), f(a), f(b), format!("{:.3e}", rel(a, b)), holds.to_string()]);
    let mut worst = 0.0f64;
    for s in cfg.replica_seeds() {
        let q = quotient_graph(&w, &t, &LabelField::new(s))?;
        for n in cfg.stages() {
            let cs = match bernoulli_connectors(&q, n, &LabelField::new(s)) {
                Ok(cs) => cs,
                Err(Error::DegenerateSample(_)) => continue,
                Err(e) => return Err(e),
            };
            let rule = ConnectorRule::new(&cs, q.orientation);
            let (a, b) = mtp_check(&q.graph, &rule)?;
            let e = rel(a, b);
            worst = worst.max(e);
            let holds = e <= 1e-9;
            r.require(holds, "mtp-relative-error<=1e-9");
            r.row(vec!["mtp connector-rule".into(), s.to_string(), n.to_string(), f(a), f(b), format!("{e:.3e}"), holds.to_string()]);
            let got = received_mass(&q.graph, &rule);
            let min_k = cs.k.vertices().map(|v: VertexId| got[v as usize]).fold(f64::INFINITY, f64::min);
            let holds = min_k >= 1.0 - 1e-9;
            r.require(holds, "received-mass>=1-on-K_n");
            r.row(vec!["received-mass>=1-on-K_n".into(), s.to_string(), n.to_string(), "-".into(), f(min_k), "-".into(), holds.to_string()]);
        }
    }
    r.note("worst relative error", format!("{worst:.3e}"));
    Ok(r)
}
