use girg_core::cliques::{
    clique_incidence_by_weight_decile, clique_number, count_k_cliques, estimate_clique_prob_given_star, estimate_qk,
    estimate_triangle_prob_given_wedge, star_precondition, EdgeModel, WeightSource,
};
use girg_core::distance::{pair_distance_covariance_with, tv_convergence_curve, MAX_ENUMERABLE_N};
use girg_core::model::{kappa, sample_weights};
use girg_core::samplers::{sample_girg_auto, sample_irg, write_edge_list, EdgeListHeader, Pairing, Space};
use girg_core::stats::{fit_loglog_slope, mean_and_stderr};
use girg_core::theory::*;
use girg_core::{EstimateWithError, Exec, GraphSample, ModelParams, SeededStream, WeightSequence};

use crate::config::{Scenario, Settings};
use crate::error::{invalid, CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

pub enum Artifact {
    Csv(Table),
    EdgeList(Vec<u8>),
}

/// A validated scenario, ready to run.
pub type Job = Box<dyn FnOnce() -> CliResult<Artifact>>;

fn num(x: f64) -> String {
    format!("{x}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn int(x: impl std::fmt::Display) -> String {
    x.to_string()
}

fn successes(e: &EstimateWithError) -> u64 {
    (e.mean * e.trials as f64).round() as u64
}

fn joined(w: &[f64]) -> String {
    w.iter().map(|x| num(*x)).collect::<Vec<_>>().join(";")
}

fn prediction_columns(p: Option<RegimePrediction>) -> [String; 2] {
    match p {
        Some(p) => [opt(p.n_exponent), p.form.to_string()],
        None => [String::new(), String::new()],
    }
}

fn edge_model(s: &Settings) -> CliResult<EdgeModel> {
    match s.raw("model")? {
        "girg" => Ok(EdgeModel::Girg),
        "irg" => Ok(EdgeModel::Irg),
        other => Err(invalid("model", format!("`{other}` is not girg or irg"))),
    }
}

fn at_least(key: &str, v: u64, min: u64) -> CliResult<u64> {
    if v < min {
        return Err(invalid(key, format!("{v} is below the minimum {min}")));
    }
    Ok(v)
}

fn root(s: &Settings) -> CliResult<SeededStream> {
    Ok(SeededStream::from_seed(s.seed()?))
}

/// Parses and validates the settings, returning the computation to run.
pub fn prepare(s: &Settings) -> CliResult<Job> {
    match s.scenario() {
        Scenario::Generate => generate(s),
        Scenario::Cliques => cliques(s),
        Scenario::Qk => qk(s),
        Scenario::StarCond => star_cond(s),
        Scenario::TriangleCond => triangle_cond(s),
        Scenario::Bounds => bounds(s),
        Scenario::TvCurve => tv_curve(s),
        Scenario::Covariance => covariance(s),
        Scenario::Table1Sweep => clique_count_sweep(s, false),
        Scenario::Table2Sweep => clique_count_sweep(s, true),
        Scenario::Table3Sweep => clique_number_sweep(s),
    }
}

fn sample_graph(
    params: &ModelParams,
    model: EdgeModel,
    stream: &SeededStream,
) -> CliResult<(WeightSequence, GraphSample)> {
    let w = sample_weights(params, stream)?;
    let g = match model {
        EdgeModel::Girg => sample_girg_auto(params, &w, stream)?,
        EdgeModel::Irg => sample_irg(params, &w, stream)?,
    };
    Ok((w, g))
}

fn generate(s: &Settings) -> CliResult<Job> {
    let params = s.params(s.integer("n")? as usize, s.real("beta")?, s.integer("d")? as usize)?;
    let model = edge_model(s)?;
    let seed = s.seed()?;
    Ok(Box::new(move || {
        let (_, g) = sample_graph(&params, model, &SeededStream::from_seed(seed))?;
        let header = EdgeListHeader {
            n: params.n,
            params_digest: params.digest(),
            seed,
        };
        let mut buf = Vec::new();
        write_edge_list(&g, &header, &mut buf).map_err(|e| CliError::Io {
            path: "<edge list>".into(),
            source: e,
        })?;
        Ok(Artifact::EdgeList(buf))
    }))
}

fn cliques(s: &Settings) -> CliResult<Job> {
    let params = s.params(s.integer("n")? as usize, s.real("beta")?, s.integer("d")? as usize)?;
    let ks = s.usizes("ks")?;
    if ks.contains(&0) {
        return Err(invalid("ks", "clique sizes start at 1"));
    }
    let graphs = at_least("graphs", s.integer("graphs")?, 1)?;
    let deciles = match s.raw("report")? {
        "counts" => false,
        "deciles" => true,
        other => return Err(invalid("report", format!("`{other}` is not counts or deciles"))),
    };
    let dregime: DRegime = s.get("dregime")?;
    let r = root(s)?;
    Ok(Box::new(move || {
        let graphs_out = Exec::default().map(graphs, |i| -> CliResult<_> {
            let (w, g) = sample_graph(&params, EdgeModel::Girg, &r.child(i))?;
            let counts: Vec<u64> = ks.iter().map(|&k| count_k_cliques(&g, k)).collect();
            let dec: Vec<_> = if deciles {
                ks.iter()
                    .map(|&k| clique_incidence_by_weight_decile(&g, w.as_slice(), k))
                    .collect()
            } else {
                Vec::new()
            };
            Ok((g.edge_count(), clique_number(&g), counts, dec))
        });
        let p = params;
        let table = if deciles {
            let mut t = Table::new(vec![
                "graph",
                "n",
                "beta",
                "d",
                "k",
                "decile",
                "min_weight",
                "max_weight",
                "vertices",
                "incidence",
            ]);
            for (i, res) in graphs_out.into_iter().enumerate() {
                let (_, _, _, dec) = res?;
                for (k, rows) in ks.iter().zip(dec) {
                    for r in rows {
                        t.push(vec![
                            int(i),
                            int(p.n),
                            num(p.beta),
                            int(p.d),
                            int(k),
                            int(r.decile),
                            num(r.min_weight),
                            num(r.max_weight),
                            int(r.vertices),
                            int(r.incidence),
                        ]);
                    }
                }
            }
            t
        } else {
            let mut t = Table::new(vec![
                "graph",
                "n",
                "beta",
                "w0",
                "lambda",
                "d",
                "norm",
                "edges",
                "clique_number",
                "k",
                "count",
                "dregime",
                "predicted_n_exponent",
                "predicted_form",
            ]);
            for (i, res) in graphs_out.into_iter().enumerate() {
                let (edges, omega, counts, _) = res?;
                for (&k, c) in ks.iter().zip(counts) {
                    let [e, f] = prediction_columns(expected_kk_regime(p.beta, k, dregime).ok());
                    t.push(vec![
                        int(i),
                        int(p.n),
                        num(p.beta),
                        num(p.w0),
                        num(p.lambda),
                        int(p.d),
                        p.norm.to_string(),
                        int(edges),
                        int(omega),
                        int(k),
                        int(c),
                        format!("{dregime:?}").to_lowercase(),
                        e,
                        f,
                    ]);
                }
            }
            t
        };
        Ok(Artifact::Csv(table))
    }))
}

fn qk(s: &Settings) -> CliResult<Job> {
    let n = s.integer("n")? as usize;
    let beta = s.real("beta")?;
    let ds = s.usizes("ds")?;
    let ks = s.usizes("ks")?;
    let model = edge_model(s)?;
    let fixed = match s.raw("weights")? {
        "pareto" => None,
        _ => Some(s.reals("weights")?),
    };
    if let Some(w) = &fixed {
        if ks.iter().any(|&k| k != w.len()) {
            return Err(invalid("weights", format!("{} fixed weights but ks = {ks:?}", w.len())));
        }
    }
    if ks.iter().any(|&k| k < 2) {
        return Err(invalid("ks", "need k >= 2"));
    }
    let params: Vec<ModelParams> = ds.iter().map(|&d| s.params(n, beta, d)).collect::<CliResult<_>>()?;
    let trials = s.trials()?;
    let r = root(s)?;
    Ok(Box::new(move || {
        let mut t = Table::new(vec![
            "model",
            "n",
            "beta",
            "w0",
            "lambda",
            "d",
            "norm",
            "k",
            "weights",
            "trials",
            "successes",
            "estimate",
            "stderr",
            "upper_n_exponent",
            "lower_n_exponent",
            "lower_form",
        ]);
        for (di, p) in params.iter().enumerate() {
            for (ki, &k) in ks.iter().enumerate() {
                let source = match &fixed {
                    Some(w) => WeightSource::Fixed(w.clone()),
                    None => WeightSource::Pareto,
                };
                let e = estimate_qk(p, k, trials, model, &source, &r.child(di as u64).child(ki as u64))?;
                let upper = qk_regime_upper(k, p.beta).ok();
                let lower = qk_lower_lowdim(k, p.beta, p.d).ok();
                let [le, lf] = prediction_columns(lower);
                t.push(vec![
                    format!("{model:?}").to_lowercase(),
                    int(p.n),
                    num(p.beta),
                    num(p.w0),
                    num(p.lambda),
                    int(p.d),
                    p.norm.to_string(),
                    int(k),
                    fixed.as_deref().map(joined).unwrap_or_else(|| "pareto".into()),
                    int(trials),
                    int(successes(&e)),
                    num(e.mean),
                    num(e.stderr),
                    opt(upper.and_then(|u| u.n_exponent)),
                    le,
                    lf,
                ]);
            }
        }
        Ok(Artifact::Csv(t))
    }))
}

fn star_cond(s: &Settings) -> CliResult<Job> {
    let n = s.integer("n")? as usize;
    let ds = s.usizes("ds")?;
    let ratio = s.real("ratio")?;
    let configs: Vec<Vec<f64>> = match s.raw("weights")? {
        "uniform" => {
            if !(ratio >= 1.0) {
                return Err(invalid("ratio", "leaf weights must be at least the centre weight"));
            }
            s.usizes("ks")?
                .into_iter()
                .map(|k| {
                    let mut w = vec![ratio; k.max(1)];
                    w[0] = 1.0;
                    w
                })
                .collect()
        }
        _ => vec![s.reals("weights")?],
    };
    let mut cases = Vec::new();
    for w in &configs {
        if w.len() < 3 {
            return Err(invalid("ks", "star conditioning needs k >= 3"));
        }
        for &d in &ds {
            let p = s.params(n, 2.5, d)?;
            let pre = star_precondition(&p, w)?;
            if !pre.satisfied {
                return Err(CliError::Infeasible(format!(
                    "k = {}, d = {d}: c^2 t(w1,w1) = {:.4} exceeds 1/4; increase n",
                    w.len(),
                    pre.max_threshold
                )));
            }
            if w[1..].iter().any(|&x| x < w[0]) {
                return Err(invalid("weights", "the first weight must be minimal"));
            }
            cases.push((p, w.clone(), pre.c));
        }
    }
    let trials = s.trials()?;
    let uniform = s.raw("weights")? == "uniform";
    let r = root(s)?;
    Ok(Box::new(move || {
        let mut t = Table::new(vec![
            "k",
            "d",
            "n",
            "lambda",
            "weights",
            "c",
            "trials",
            "successes",
            "estimate",
            "stderr",
            "sandwich_lower",
            "sandwich_upper",
            "uniform_exact",
        ]);
        for (i, (p, w, c)) in cases.iter().enumerate() {
            let e = estimate_clique_prob_given_star(p, w, trials, &r.child(i as u64))?;
            let k = w.len();
            let b = star_clique_sandwich(k, p.d, *c)?;
            let exact = if uniform {
                cond_clique_prob_uniform(k, p.d, ratio).ok()
            } else {
                None
            };
            t.push(vec![
                int(k),
                int(p.d),
                int(p.n),
                num(p.lambda),
                joined(w),
                num(*c),
                int(trials),
                int(successes(&e)),
                num(e.mean),
                num(e.stderr),
                num(b.lower),
                num(b.upper),
                opt(exact),
            ]);
        }
        Ok(Artifact::Csv(t))
    }))
}

fn triangle_cond(s: &Settings) -> CliResult<Job> {
    let n = s.integer("n")? as usize;
    let arcs = s.reals("arcs")?;
    if arcs.iter().any(|&a| !(a > 0.0 && a <= 1.0)) {
        return Err(invalid("arcs", "each arc must lie in (0, 1]"));
    }
    let ds = s.usizes("ds")?;
    let mut cases = Vec::new();
    for &a in &arcs {
        for &d in &ds {
            let lambda = n as f64 * a.powi(d as i32);
            cases.push((a, ModelParams::new(n, 2.5, 1.0, lambda, d, girg_core::Norm::Infinity)?));
        }
    }
    let trials = s.trials()?;
    let r = root(s)?;
    Ok(Box::new(move || {
        let mut t = Table::new(vec![
            "a",
            "d",
            "n",
            "lambda",
            "trials",
            "successes",
            "estimate",
            "stderr",
            "exact",
        ]);
        for (i, (a, p)) in cases.iter().enumerate() {
            let e = estimate_triangle_prob_given_wedge(p, [1.0; 3], trials, &r.child(i as u64))?;
            t.push(vec![
                num(*a),
                int(p.d),
                int(p.n),
                num(p.lambda),
                int(trials),
                int(successes(&e)),
                num(e.mean),
                num(e.stderr),
                opt(triangle_cond_prob(*a, p.d).ok()),
            ]);
        }
        Ok(Artifact::Csv(t))
    }))
}

fn bounds(s: &Settings) -> CliResult<Job> {
    let n = s.integer("n")? as usize;
    let weight = s.real("weight")?;
    let ks = s.usizes("ks")?;
    if ks.iter().any(|&k| k < 3) {
        return Err(invalid("ks", "bounds need k >= 3"));
    }
    let ds = s.usizes("ds")?;
    let c = s.real("c")?;
    let ratio = s.real("ratio")?;
    let (c1, c2, eps) = (s.real("c1")?, s.real("c2")?, s.real("epsilon")?);
    let params: Vec<ModelParams> = ds.iter().map(|&d| s.params(n, 2.5, d)).collect::<CliResult<_>>()?;
    Ok(Box::new(move || {
        let mut t = Table::new(vec![
            "k",
            "d",
            "n",
            "lambda",
            "weight",
            "kappa",
            "c",
            "sandwich_lower",
            "sandwich_upper",
            "ratio",
            "uniform_cond",
            "highdim_lower",
            "highdim_lower_valid",
            "highdim_upper",
            "highdim_upper_valid",
            "irg_probability",
            "triangle_cond",
            "clique_number_prediction",
        ]);
        for p in &params {
            let kap = kappa(weight, weight, p);
            let nf = p.n as f64;
            let omega = clique_number_point_prediction(nf, p.d as f64, c1, c2, eps).ok();
            for &k in &ks {
                let edges: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
                let sandwich = star_clique_sandwich(k, p.d, c)?;
                let lower = highdim_superset_lower(p.d, &vec![kap; k * k], k, nf, &edges)?;
                let upper = highdim_superset_upper(k, p.d, &vec![kap; edges.len()], kap, nf)?;
                let tri = if k == 3 {
                    triangle_cond_prob_from_kappa(kap, nf, p.d).ok()
                } else {
                    None
                };
                t.push(vec![
                    int(k),
                    int(p.d),
                    int(p.n),
                    num(p.lambda),
                    num(weight),
                    num(kap),
                    num(c),
                    num(sandwich.lower),
                    num(sandwich.upper),
                    num(ratio),
                    opt(cond_clique_prob_uniform(k, p.d, ratio).ok()),
                    num(lower.value),
                    int(lower.valid),
                    num(upper.value),
                    int(upper.valid),
                    num(irg_superset_probability(&vec![kap; edges.len()], nf)),
                    opt(tri),
                    opt(omega),
                ]);
            }
        }
        Ok(Artifact::Csv(t))
    }))
}

fn tv_curve(s: &Settings) -> CliResult<Job> {
    let n = s.integer("n")? as usize;
    if n > MAX_ENUMERABLE_N {
        return Err(CliError::Infeasible(format!(
            "tv-curve enumerates all labelled graphs; n = {n} exceeds {MAX_ENUMERABLE_N}"
        )));
    }
    let params = s.params(n, s.real("beta")?, 1)?;
    let weights = s.reals("weights")?;
    if weights.len() != n {
        return Err(invalid("weights", format!("{} weights for n = {n}", weights.len())));
    }
    let weights = WeightSequence::new(weights, params.w0)?;
    let ds = s.usizes("ds")?;
    for &d in &ds {
        params.with_d(d).validate()?;
    }
    let trials = s.trials()?;
    let r = root(s)?;
    Ok(Box::new(move || {
        let curve = tv_convergence_curve(&params, &weights, &ds, trials, &r)?;
        let mut t = Table::new(vec![
            "n",
            "norm",
            "d",
            "trials",
            "seed",
            "tv",
            "bias_bound",
            "threshold",
            "below_threshold",
        ]);
        for pt in curve {
            let threshold = f64::max(0.05, 3.0 * pt.bias_bound);
            t.push(vec![
                int(n),
                params.norm.to_string(),
                int(pt.d),
                int(pt.trials),
                int(pt.seed),
                num(pt.tv),
                num(pt.bias_bound),
                num(threshold),
                int(pt.tv < threshold),
            ]);
        }
        Ok(Artifact::Csv(t))
    }))
}

fn covariance(s: &Settings) -> CliResult<Job> {
    let spaces = s
        .words("spaces")?
        .iter()
        .map(|w| match w.as_str() {
            "torus" => Ok(Space::Torus),
            "hypercube" | "cube" => Ok(Space::Hypercube),
            other => Err(invalid("spaces", format!("`{other}` is not torus or hypercube"))),
        })
        .collect::<CliResult<Vec<_>>>()?;
    let pairings = s
        .words("pairings")?
        .iter()
        .map(|w| match w.as_str() {
            "shared" => Ok(Pairing::SharedEndpoint),
            "disjoint" => Ok(Pairing::Disjoint),
            other => Err(invalid("pairings", format!("`{other}` is not shared or disjoint"))),
        })
        .collect::<CliResult<Vec<_>>>()?;
    let trials = at_least("trials", s.trials()?, 10_000)?;
    let r = root(s)?;
    Ok(Box::new(move || {
        let mut t = Table::new(vec!["space", "pairing", "trials", "covariance", "stderr", "theory"]);
        for (i, &space) in spaces.iter().enumerate() {
            for (j, &pairing) in pairings.iter().enumerate() {
                let (c, se) = pair_distance_covariance_with(
                    space,
                    pairing,
                    trials,
                    &r.child(i as u64).child(j as u64),
                    Exec::default(),
                )?;
                let theory = match (space, pairing) {
                    (Space::Hypercube, Pairing::SharedEndpoint) => 1.0 / 180.0,
                    _ => 0.0,
                };
                t.push(vec![
                    format!("{space:?}").to_lowercase(),
                    match pairing {
                        Pairing::SharedEndpoint => "shared",
                        Pairing::Disjoint => "disjoint",
                    }
                    .to_string(),
                    int(trials),
                    num(c),
                    num(se),
                    num(theory),
                ]);
            }
        }
        Ok(Artifact::Csv(t))
    }))
}

struct Sweep {
    betas: Vec<f64>,
    ns: Vec<usize>,
    ds: Vec<usize>,
    graphs: u64,
    dregime: DRegime,
}

fn sweep_axes(s: &Settings) -> CliResult<Sweep> {
    let sweep = Sweep {
        betas: s.reals("betas")?,
        ns: s.usizes("ns")?,
        ds: s.usizes("ds")?,
        graphs: at_least("graphs", s.integer("graphs")?, 2)?,
        dregime: s.get("dregime")?,
    };
    for &b in &sweep.betas {
        for &n in &sweep.ns {
            for &d in &sweep.ds {
                s.params(n, b, d)?;
            }
        }
    }
    Ok(sweep)
}

type SweepPoint<T> = (f64, usize, usize, Vec<T>);

/// Per-graph statistics for every `(beta, d, n)` point, weights re-sampled per `n`.
fn sweep_graphs<T, F>(s: &Settings, sw: &Sweep, stat: F) -> CliResult<Vec<SweepPoint<T>>>
where
    T: Send,
    F: Fn(&GraphSample) -> T + Sync + Send,
{
    let r = root(s)?;
    let mut out = Vec::new();
    for (bi, &beta) in sw.betas.iter().enumerate() {
        for &d in &sw.ds {
            for &n in &sw.ns {
                let p = s.params(n, beta, d)?;
                let base = r.child(bi as u64).child(d as u64).child(n as u64);
                let vals = Exec::default()
                    .map(sw.graphs, |g| -> CliResult<T> {
                        let (_, graph) = sample_graph(&p, EdgeModel::Girg, &base.child(g))?;
                        Ok(stat(&graph))
                    })
                    .into_iter()
                    .collect::<CliResult<Vec<T>>>()?;
                out.push((beta, d, n, vals));
            }
        }
    }
    Ok(out)
}

fn slope_columns(points: &[(f64, f64)]) -> [String; 2] {
    match fit_loglog_slope(points) {
        Ok((slope, se)) => [num(slope), num(se)],
        Err(_) => [String::new(), String::new()],
    }
}

fn clique_count_sweep(s: &Settings, triangles_only: bool) -> CliResult<Job> {
    let sw = sweep_axes(s)?;
    let ks = if triangles_only { vec![3] } else { s.usizes("ks")? };
    if ks.iter().any(|&k| k < 3) {
        return Err(invalid("ks", "sweeps use k >= 3"));
    }
    let settings = s.clone();
    Ok(Box::new(move || {
        let data = sweep_graphs(&settings, &sw, |g| {
            ks.iter().map(|&k| count_k_cliques(g, k) as f64).collect::<Vec<_>>()
        })?;
        let mut t = Table::new(vec![
            "beta",
            "d",
            "k",
            "n",
            "graphs",
            "mean",
            "stderr",
            "slope",
            "slope_stderr",
            "predicted_n_exponent",
            "predicted_form",
            "dregime",
        ]);
        for (ki, &k) in ks.iter().enumerate() {
            for chunk in data.chunks(sw.ns.len()) {
                let stats: Vec<(f64, f64)> = chunk
                    .iter()
                    .map(|(_, _, _, v)| mean_and_stderr(&v.iter().map(|x| x[ki]).collect::<Vec<_>>()))
                    .collect();
                let pts: Vec<(f64, f64)> = chunk.iter().zip(&stats).map(|(c, s)| (c.2 as f64, s.0)).collect();
                let [slope, slope_se] = slope_columns(&pts);
                let (beta, d) = (chunk[0].0, chunk[0].1);
                let [pe, pf] = prediction_columns(expected_kk_regime(beta, k, sw.dregime).ok());
                for ((_, _, n, v), (m, se)) in chunk.iter().zip(&stats) {
                    t.push(vec![
                        num(beta),
                        int(d),
                        int(k),
                        int(n),
                        int(v.len()),
                        num(*m),
                        num(*se),
                        slope.clone(),
                        slope_se.clone(),
                        pe.clone(),
                        pf.clone(),
                        format!("{:?}", sw.dregime).to_lowercase(),
                    ]);
                }
            }
        }
        Ok(Artifact::Csv(t))
    }))
}

fn clique_number_sweep(s: &Settings) -> CliResult<Job> {
    let sw = sweep_axes(s)?;
    let settings = s.clone();
    Ok(Box::new(move || {
        let data = sweep_graphs(&settings, &sw, clique_number)?;
        let mut t = Table::new(vec![
            "beta",
            "d",
            "n",
            "graphs",
            "mean_omega",
            "stderr",
            "median_omega",
            "max_omega",
            "slope",
            "slope_stderr",
            "predicted_n_exponent",
            "predicted_form",
            "dregime",
        ]);
        for chunk in data.chunks(sw.ns.len()) {
            let stats: Vec<(f64, f64)> = chunk
                .iter()
                .map(|(_, _, _, v)| mean_and_stderr(&v.iter().map(|&x| x as f64).collect::<Vec<_>>()))
                .collect();
            let pts: Vec<(f64, f64)> = chunk.iter().zip(&stats).map(|(c, s)| (c.2 as f64, s.0)).collect();
            let [slope, slope_se] = slope_columns(&pts);
            let [pe, pf] = prediction_columns(clique_number_regime(chunk[0].0, sw.dregime).ok());
            for ((beta, d, n, v), (m, se)) in chunk.iter().zip(&stats) {
                let mut sorted = v.clone();
                sorted.sort_unstable();
                t.push(vec![
                    num(*beta),
                    int(d),
                    int(n),
                    int(v.len()),
                    num(*m),
                    num(*se),
                    int(sorted[sorted.len() / 2]),
                    int(sorted[sorted.len() - 1]),
                    slope.clone(),
                    slope_se.clone(),
                    pe.clone(),
                    pf.clone(),
                    format!("{:?}", sw.dregime).to_lowercase(),
                ]);
            }
        }
        Ok(Artifact::Csv(t))
    }))
}
