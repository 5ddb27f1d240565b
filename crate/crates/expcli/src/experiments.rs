//! The experiment verbs. Each runs `trials` independent trials on a worker
//! pool and returns rows sorted by trial index.

use std::fs;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use rand::Rng;
use rayon::prelude::*;
use ramsey_core::additive::{
    count_small_doubling, difference_set, dimension_witness, format_set, DEFAULT_ENUMERATION_BUDGET,
};
use ramsey_core::cayley::{
    build_cayley, cayley_clique_number, cayley_independence_number, find_doubling_quadruple, rotational_coloring,
    verify_classes_isomorphic, verify_self_complementary, RotationalBranch, Sampler, SymmetricSet,
};
use ramsey_core::clique::{is_clique, max_clique_with, subgroup_clique_bound, DenseGraph, SolverOptions};
use ramsey_core::coloring::{difference_coloring, properize, split_large_classes, EdgeColoring, Host};
use ramsey_core::fewcolor::{
    ball_growth_with, clamped_ln, greedy_span, hard_instance, spanning_tree, BallOptions, GrowthPath,
};
use ramsey_core::freiman::{
    compression_inequality_check, difference_size, directions, fminus_bound_check, is_star_compressed, star_compress,
};
use ramsey_core::groups::sign_classes;
use ramsey_core::{rng, Error as CoreError, GroupSpec};

use crate::config::ExperimentConfig;
use crate::report::{BoundCheck, Report, ReportRow};
use crate::util::{
    clique_ceiling, one_of_x_or_2x, parse_group, parse_sampler, random_group, random_subset, signed_sums_contain,
    trial_seed,
};

/// Execute the experiment named in the config.
pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let mut report = match cfg.experiment.as_str() {
        "sample" => sample(cfg),
        "clique" => clique(cfg),
        "span" => span(cfg),
        "tree" => tree(cfg),
        "hard-instance" => hard(cfg),
        "growth-sim" => growth_sim(cfg),
        "count" => count(cfg),
        "dimension" => dimension(cfg),
        "compress" => compress(cfg),
        "check-fminus" => check_fminus(cfg),
        "z5d-ramsey" => z5d_ramsey(cfg),
        "coprime6-ramsey" => coprime6_ramsey(cfg),
        "rcoloring" => rcoloring(cfg),
        other => bail!("unknown experiment {other:?}"),
    }?;
    report.experiment = cfg.experiment.clone();
    Ok(report)
}

fn run_trials<F>(cfg: &ExperimentConfig, f: F) -> Result<Vec<ReportRow>>
where
    F: Fn(usize, u64) -> Result<ReportRow> + Sync + Send,
{
    run_indexed(cfg, cfg.trials, f)
}

fn run_indexed<F>(cfg: &ExperimentConfig, count: usize, f: F) -> Result<Vec<ReportRow>>
where
    F: Fn(usize, u64) -> Result<ReportRow> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build()?;
    pool.install(|| {
        (0..count)
            .into_par_iter()
            .map(|t| {
                let seed = trial_seed(cfg.seed, t);
                let start = Instant::now();
                let mut row = match f(t, seed) {
                    Ok(row) => row,
                    Err(e) => match e.downcast_ref::<CoreError>() {
                        Some(CoreError::StatisticalFailure { .. }) => {
                            let mut row = ReportRow::new(t, seed);
                            row.set("error", e.to_string()).flag("statistical-failure");
                            row
                        }
                        _ => return Err(e.context(format!("trial {t}"))),
                    },
                };
                row.wall_ms = start.elapsed().as_secs_f64() * 1e3;
                Ok(row)
            })
            .collect()
    })
}

fn group_or(cfg: &ExperimentConfig, default: &str) -> Result<GroupSpec> {
    parse_group(cfg.group.as_deref().unwrap_or(default))
}

fn solver(cfg: &ExperimentConfig) -> SolverOptions {
    SolverOptions {
        node_budget: cfg.budget,
        workers: 1,
    }
}

/// Every pairwise difference of `w` lies in `s`.
fn is_cayley_clique(g: &GroupSpec, s: &SymmetricSet, w: &[usize]) -> bool {
    w.iter()
        .enumerate()
        .all(|(i, &x)| w[i + 1..].iter().all(|&y| s.contains(g.sub_idx(x, y))))
}

/// `|A − A| ≥ |A|^{4/3}`, decided as `|A−A|^3 ≥ |A|^4`.
fn growth_check(g: &GroupSpec, name: &str, w: &[usize]) -> Result<Option<BoundCheck>> {
    if w.len() < 2 {
        return Ok(None);
    }
    let d = difference_set(g, w)?.diff.len() as u128;
    let a = w.len() as u128;
    let pass = d.pow(3) >= a.pow(4);
    Ok(Some(BoundCheck::new(
        name,
        "|A-A| >= |A|^(4/3)",
        d as f64,
        (a as f64).powf(4.0 / 3.0),
        pass,
        true,
    )))
}

/// Record clique and independence numbers of `Cay(G, S)` and their ceilings.
fn clique_pair(
    cfg: &ExperimentConfig,
    g: &GroupSpec,
    s: &SymmetricSet,
    row: &mut ReportRow,
    hard_ceiling: bool,
    growth: bool,
) -> Result<()> {
    let opts = solver(cfg);
    let cl = cayley_clique_number(g, s, opts);
    let ind = cayley_independence_number(g, s, opts);
    let exact = cl.maximum && ind.maximum;
    if !exact {
        row.flag("inexact");
    }
    row.set("clique", cl.size())
        .set("independence", ind.size())
        .set("exact", exact)
        .set("solver_nodes", cl.nodes + ind.nodes);
    row.check(BoundCheck::holds(
        "witnesses",
        "witnesses are a clique and an independent set",
        is_cayley_clique(g, s, &cl.vertices) && is_cayley_clique(g, &s.complement(), &ind.vertices),
        true,
    ));
    let ceiling = clique_ceiling(g.order());
    row.check(BoundCheck::le(
        "clique-ceiling",
        "omega <= 4 log2 N",
        cl.size() as f64,
        ceiling,
        hard_ceiling && cl.maximum,
    ));
    row.check(BoundCheck::le(
        "independence-ceiling",
        "alpha <= 4 log2 N",
        ind.size() as f64,
        ceiling,
        hard_ceiling && ind.maximum,
    ));
    if growth {
        for (name, w) in [("clique-growth", &cl.vertices), ("independence-growth", &ind.vertices)] {
            if let Some(c) = growth_check(g, name, w)? {
                row.check(c);
            }
        }
    }
    Ok(())
}

/// Per-class inclusion frequencies against 1/2, over fresh samples of every trial.
fn class_symmetry(cfg: &ExperimentConfig, g: &GroupSpec, sampler: Sampler) -> Result<BoundCheck> {
    let reps: Vec<usize> = sign_classes(g).classes().iter().map(|c| c.rep).collect();
    let mut hits = vec![0usize; reps.len()];
    for t in 0..cfg.trials {
        let s = sampler.sample(g, trial_seed(cfg.seed, t))?;
        for (h, &x) in hits.iter_mut().zip(&reps) {
            *h += s.contains(x) as usize;
        }
    }
    let n = cfg.trials as f64;
    let worst = hits.iter().map(|&h| (h as f64 / n - 0.5).abs()).fold(0.0, f64::max);
    let sigma = (0.25 / n).sqrt();
    Ok(BoundCheck::le(
        "complement-symmetry",
        "max_class |freq - 1/2| <= 5 sigma",
        worst,
        5.0 * sigma,
        true,
    ))
}

fn sample(cfg: &ExperimentConfig) -> Result<Report> {
    let g = group_or(cfg, "Z5^4")?;
    let sampler = parse_sampler(cfg.sampler.as_deref().unwrap_or("uniform:0.5"))?;
    let emit: bool = cfg.param("emit", false)?;
    let rows = run_trials(cfg, |t, seed| {
        let s = sampler.sample(&g, seed)?;
        let mut row = ReportRow::new(t, seed);
        row.set("group", g.to_string()).set("sampler", sampler.name()).set("size", s.len());
        match sampler {
            Sampler::Z5d => {
                row.check(BoundCheck::holds("x-or-2x", "exactly one of x, 2x in S", one_of_x_or_2x(&g, &s), true));
            }
            Sampler::Coprime6 => {
                let free = find_doubling_quadruple(&g, &s).is_none();
                row.check(BoundCheck::holds("quadruple-free", "no y with y, 2y, 4y, 8y in S", free, true));
            }
            Sampler::Uniform(_) => {}
        }
        if emit {
            row.set("elements", format_set(&g, &s.elements().collect::<Vec<_>>()));
        }
        Ok(row)
    })?;
    let mut report = Report::new("sample", rows);
    if !matches!(sampler, Sampler::Uniform(_)) {
        let mut c = class_symmetry(cfg, &g, sampler)?;
        c.hard = false;
        report.summary.push(c);
    }
    Ok(report)
}

fn clique(cfg: &ExperimentConfig) -> Result<Report> {
    if let Some(path) = &cfg.input {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let graph = DenseGraph::parse_adjacency_list(&text)?;
        let opts = solver(cfg);
        let cl = max_clique_with(&graph, opts);
        let ind = max_clique_with(&graph.complement(), opts);
        let mut row = ReportRow::new(0, cfg.seed);
        row.set("vertices", graph.num_vertices())
            .set("edges", graph.num_edges())
            .set("clique", cl.size())
            .set("independence", ind.size())
            .set("witness", format!("{:?}", cl.vertices))
            .set("solver_nodes", cl.nodes + ind.nodes);
        if !(cl.maximum && ind.maximum) {
            row.flag("inexact");
        }
        row.check(BoundCheck::holds(
            "witnesses",
            "witnesses are a clique and an independent set",
            is_clique(&graph, &cl.vertices) && is_clique(&graph.complement(), &ind.vertices),
            true,
        ));
        return Ok(Report::new("clique", vec![row]));
    }
    let g = group_or(cfg, "Z5^4")?;
    let sampler = parse_sampler(cfg.sampler.as_deref().unwrap_or("uniform:0.5"))?;
    let rows = run_trials(cfg, |t, seed| {
        let s = sampler.sample(&g, seed)?;
        let mut row = ReportRow::new(t, seed);
        row.set("group", g.to_string()).set("sampler", sampler.name()).set("size", s.len());
        clique_pair(cfg, &g, &s, &mut row, false, false)?;
        if g.field_characteristic().is_some() {
            let w = subgroup_clique_bound(&g, &s, g.rank());
            row.set("subgroup", w.elements.len());
            let clique = row.get_f64("clique").unwrap_or(0.0);
            row.check(BoundCheck::le(
                "subgroup-witness",
                "|H| <= omega",
                w.elements.len() as f64,
                clique,
                !row.has_flag("inexact"),
            ));
        }
        Ok(row)
    })?;
    Ok(Report::new("clique", rows))
}

/// The group of one trial: the configured one, or a random group of order in
/// `n..=max_order` when the group is `random`.
fn trial_group(cfg: &ExperimentConfig, fixed: &Option<GroupSpec>, n: usize, seed: u64) -> Result<GroupSpec> {
    match fixed {
        Some(g) => Ok(g.clone()),
        None => {
            let max_order: usize = cfg.param("max_order", 4096)?;
            random_group(rng::child_seed(seed, 0, "trial-group"), n, max_order)
        }
    }
}

fn fixed_group(cfg: &ExperimentConfig) -> Result<Option<GroupSpec>> {
    match cfg.group.as_deref() {
        None | Some("random") => Ok(None),
        Some(text) => parse_group(text).map(Some),
    }
}

fn proper_difference(g: &GroupSpec, n: usize, seed: u64) -> Result<EdgeColoring> {
    let a = random_subset(g.order(), n, seed, "difference-subset")?;
    Ok(properize(&difference_coloring(g, &a)?.coloring))
}

fn span(cfg: &ExperimentConfig) -> Result<Report> {
    let sizes: Vec<usize> = cfg.param_list("sizes", &[64])?;
    if sizes.is_empty() {
        bail!("sizes is empty");
    }
    let fixed = fixed_group(cfg)?;
    let rows = run_trials(cfg, |t, seed| {
        let n = sizes[t % sizes.len()];
        let g = trial_group(cfg, &fixed, n, seed)?;
        let c = proper_difference(&g, n, seed)?;
        let k = c.num_colors() as f64 / n as f64;
        let trace = greedy_span(&c, 0)?;
        let bound = 6.0 * k * (n as f64).ln();
        let mut row = ReportRow::new(t, seed);
        row.set("group", g.to_string())
            .set("n", n)
            .set("colors", c.num_colors())
            .set("k", k)
            .set("span", trace.len())
            .set("reached", trace.reached().last().copied().unwrap_or(1));
        row.check(BoundCheck::le("span-bound", "s <= 6 K ln n", trace.len() as f64, bound, true));
        Ok(row)
    })?;
    Ok(Report::new("span", rows))
}

fn rainbow(n: usize) -> Result<EdgeColoring> {
    let host = Host::Complete { n };
    Ok(EdgeColoring::from_edge_colors(host, (0..host.num_edges() as u32).collect())?)
}

fn tree(cfg: &ExperimentConfig) -> Result<Report> {
    let host = cfg.param_str("host").unwrap_or("rainbow").to_string();
    let fixed = fixed_group(cfg)?;
    let sizes: Vec<usize> = cfg.param_list("sizes", &[])?;
    let instance_k: f64 = cfg.param("k", 4.0)?;
    let default_n = match host.as_str() {
        "rainbow" => 32,
        "difference" => 64,
        "hard" => 4096,
        other => bail!("unknown host {other:?} (rainbow, difference, hard)"),
    };
    let n_fixed: usize = cfg.param("n", default_n)?;
    let rows = run_trials(cfg, |t, seed| {
        let n = if sizes.is_empty() { n_fixed } else { sizes[t % sizes.len()] };
        let mut row = ReportRow::new(t, seed);
        row.set("host", host.as_str()).set("n", n);
        let c = match host.as_str() {
            "rainbow" => rainbow(n)?,
            "difference" => {
                let g = trial_group(cfg, &fixed, n, seed)?;
                row.set("group", g.to_string());
                proper_difference(&g, n, seed)?
            }
            _ => {
                let inst = hard_instance(n, instance_k, rng::child_seed(seed, 0, "tree-instance"))?;
                row.set("instance_k", instance_k).set("s", inst.s).set("bad_edges", inst.bad_edges);
                inst.coloring
            }
        };
        let cert = spanning_tree(&c, rng::child_seed(seed, 0, "tree"))?;
        let k = c.num_colors() as f64 / c.num_vertices() as f64;
        row.set("vertices", c.num_vertices())
            .set("colors", c.num_colors())
            .set("k", k)
            .set("tree_colors", cert.num_colors())
            .set("phase1_colors", cert.phase1_colors.len())
            .set("phase2_colors", cert.phase2_colors.len())
            .set("path", path_name(cert.flags.path))
            .set("growth_attempts", cert.flags.growth_attempts)
            .set("coalesce_reached", cert.flags.coalesce_reached)
            .set("coalesce_fallback_steps", cert.flags.coalesce_fallback_steps);
        if cert.flags.statistical_failure {
            row.flag("statistical-failure");
        }
        let valid = cert.validate(&c);
        if let Err(e) = &valid {
            row.set("invalid", e.to_string());
        }
        row.check(BoundCheck::holds(
            "certificate",
            "edges lie in the host, colors match, the tree spans",
            valid.is_ok() && cert.is_spanning(),
            true,
        ));
        row.check(BoundCheck::le(
            "tree-bound",
            "colors <= 1000 K ln(n/K)",
            cert.num_colors() as f64,
            cert.bound,
            true,
        ));
        if host == "hard" {
            let floor = instance_k / 50.0 * clamped_ln(n as f64 / instance_k);
            row.check(BoundCheck::le(
                "instance-floor",
                "(1/50) K ln(n/K) <= colors",
                floor,
                cert.num_colors() as f64,
                false,
            ));
        }
        Ok(row)
    })?;
    let mut report = Report::new("tree", rows);
    if host == "hard" {
        let (pass, _) = report.count_passing("instance-floor");
        let need = (9 * report.rows.len()).div_ceil(10);
        report.summary.push(BoundCheck::new(
            "floor-frequency",
            "floor met in at least 9/10 of trials",
            pass as f64,
            need as f64,
            pass >= need,
            true,
        ));
    }
    Ok(report)
}

fn path_name(p: GrowthPath) -> &'static str {
    match p {
        GrowthPath::Ball => "ball",
        GrowthPath::KlogK => "klogk",
        GrowthPath::Direct => "direct",
    }
}

fn hard(cfg: &ExperimentConfig) -> Result<Report> {
    let n: usize = cfg.param("n", 4096)?;
    let k: f64 = cfg.param("k", 4.0)?;
    let rows = run_trials(cfg, |t, seed| {
        let inst = hard_instance(n, k, seed)?;
        let mut row = ReportRow::new(t, seed);
        row.set("n", inst.n)
            .set("s", inst.s)
            .set("palette", inst.palette)
            .set("colors", inst.coloring.num_colors())
            .set("bad_edges", inst.bad_edges);
        row.check(BoundCheck::holds("proper", "the coloring is proper", inst.coloring.is_proper(), true));
        row.check(BoundCheck::le(
            "palette-budget",
            "colors <= 5 K n",
            inst.coloring.num_colors() as f64,
            5.0 * k * n as f64,
            false,
        ));
        Ok(row)
    })?;
    Ok(Report::new("hard-instance", rows))
}

fn growth_sim(cfg: &ExperimentConfig) -> Result<Report> {
    let g = group_or(cfg, "Z2^12")?;
    let n: usize = cfg.param("n", 512)?;
    let k: f64 = cfg.param("k", 64.0)?;
    let traced: usize = cfg.param("vertices", 200)?;
    let verify: bool = cfg.param("verify", true)?;
    let max_exceed: f64 = cfg.param("max_exceed", 0.2)?;
    let rows = run_trials(cfg, |t, seed| {
        let a = random_subset(g.order(), n, seed, "growth-subset")?;
        let c = difference_coloring(&g, &a)?.coloring;
        let c = if c.is_proper() { c } else { properize(&c) };
        let split = split_large_classes(&c, k)?;
        let opts = BallOptions {
            vertices: Some(random_subset(n, traced.min(n), seed, "growth-vertices")?),
            retries: 1,
            verify,
        };
        let trace = ball_growth_with(&split, k, rng::child_seed(seed, 0, "growth-sim"), &opts)?;
        let exceeded = trace.vertices.iter().filter(|v| v.exceeds(trace.params.kappa)).count();
        let mut row = ReportRow::new(t, seed);
        row.set("n", n)
            .set("k", k)
            .set("colors", split.num_colors())
            .set("j", trace.params.j)
            .set("kappa", trace.params.kappa)
            .set("traced", trace.vertices.len())
            .set("exceeded", exceeded)
            .set("verified", trace.verified)
            .set("success", trace.success);
        if let Some(w) = &trace.warning {
            row.set("warning", w.as_str()).flag("fallback");
        }
        let max_t = trace.vertices.iter().filter_map(|v| v.t_j).max();
        row.set("max_t_j", max_t.map_or(serde_json::Value::Null, |t| t.into()));
        row.check(BoundCheck::le(
            "ball-tail",
            "freq(T_J > 900K) <= max_exceed",
            trace.exceed_fraction,
            max_exceed,
            trace.fallback.is_none(),
        ));
        Ok(row)
    })?;
    Ok(Report::new("growth-sim", rows))
}

fn count(cfg: &ExperimentConfig) -> Result<Report> {
    let g = group_or(cfg, "F2^4")?;
    let n: usize = cfg.param("n", 4)?;
    let m: usize = cfg.param("m", n)?;
    let c: f64 = cfg.param("c", 2000.0)?;
    let budget: u128 = cfg.param("enum_budget", DEFAULT_ENUMERATION_BUDGET)?;
    let dc = count_small_doubling(&g, n, m, budget)?;
    let big_n = g.order() as f64;
    let mut rows = Vec::new();
    let mut previous = 0u128;
    let mut monotone = true;
    for d in 0..dc.histogram.len() {
        let cumulative = dc.at_most(d);
        monotone &= cumulative >= previous;
        previous = cumulative;
        let mut row = ReportRow::new(d, cfg.seed);
        row.set("n", n)
            .set("m", d)
            .set("exact", dc.histogram[d].to_string())
            .set("at_most", cumulative.to_string());
        if cumulative > 0 {
            let k = d as f64 / n as f64;
            let ceiling = c * (k + (n as f64).ln()) * big_n.ln() + n as f64 * (c * k).ln();
            row.check(BoundCheck::le(
                "count-ceiling",
                "ln count <= C (K + ln n) ln N + n ln(C K)",
                (cumulative as f64).ln(),
                ceiling,
                true,
            ));
        }
        rows.push(row);
    }
    let mut report = Report::new("count", rows);
    report.summary.push(BoundCheck::holds(
        "monotone",
        "count(|A-A| <= m) is nondecreasing in m",
        monotone,
        true,
    ));
    report.summary.push(BoundCheck::new(
        "count",
        "count(m) = sum of histogram up to m",
        dc.count as f64,
        dc.at_most(m) as f64,
        dc.count == dc.at_most(m),
        true,
    ));
    Ok(report)
}

fn dimension(cfg: &ExperimentConfig) -> Result<Report> {
    let g = group_or(cfg, "Z4093")?;
    let n: usize = cfg.param("n", 128)?;
    let rows = run_trials(cfg, |t, seed| {
        let a = random_subset(g.order(), n, seed, "dimension-subset")?;
        let w = dimension_witness(&g, &a)?;
        let mut row = ReportRow::new(t, seed);
        row.set("n", n).set("k", w.k).set("len", w.len()).set("bound", w.bound);
        row.check(BoundCheck::holds(
            "containment",
            "A within base + sum of {-1,0,1} s_i (replayed)",
            signed_sums_contain(&g, w.base, &w.sequence, &a),
            true,
        ));
        row.check(BoundCheck::le(
            "dimension-bound",
            "|S| <= 18 K ln n",
            w.len() as f64,
            18.0 * w.k * (n as f64).ln(),
            true,
        ));
        Ok(row)
    })?;
    Ok(Report::new("dimension", rows))
}

fn random_size<R: Rng>(r: &mut R, lo: usize, hi: usize) -> usize {
    r.gen_range(lo..=hi)
}

fn compress(cfg: &ExperimentConfig) -> Result<Report> {
    let mode = cfg.param_str("mode").unwrap_or("star").to_string();
    let g = group_or(cfg, "F3^3")?;
    if g.field_characteristic().is_none() {
        bail!("compress needs a vector space over a prime field");
    }
    let order = g.order();
    let fixed_n: usize = cfg.param("n", 0)?;
    let rows = match mode.as_str() {
        "star" => run_trials(cfg, |t, seed| {
            let mut r = rng::stream(seed, 0, "compress-size");
            let n = if fixed_n == 0 { random_size(&mut r, 1, order) } else { fixed_n };
            let mut a = random_subset(order, n.min(order), seed, "compress-set")?;
            a.extend((0..g.rank()).map(|i| g.unit(i)));
            a.sort_unstable();
            a.dedup();
            let out = star_compress(&g, &a)?;
            let before = difference_size(&g, &a);
            let after = difference_size(&g, &out.set);
            let mut row = ReportRow::new(t, seed);
            row.set("set", format_set(&g, &a))
                .set("compressed", format_set(&g, &out.set))
                .set("size", a.len())
                .set("compressions", out.compressions)
                .set("diff_before", before)
                .set("diff_after", after);
            row.check(BoundCheck::holds(
                "star-compressed",
                "output is *-compressed",
                is_star_compressed(&g, &out.set)?,
                true,
            ));
            row.check(BoundCheck::holds("size-kept", "|C(A)| = |A|", out.set.len() == a.len(), true));
            row.check(BoundCheck::le("no-growth", "|C(A)-C(A)| <= |A-A|", after as f64, before as f64, true));
            Ok(row)
        })?,
        "inequality" => {
            let dirs = directions(&g);
            run_trials(cfg, |t, seed| {
                let mut r = rng::stream(seed, 0, "compress-sizes");
                let na = random_size(&mut r, 1, order);
                let nb = random_size(&mut r, 1, order);
                let v = dirs[r.gen_range(0..dirs.len())];
                let a = random_subset(order, na, seed, "compress-a")?;
                let b = random_subset(order, nb, seed, "compress-b")?;
                let chk = compression_inequality_check(&g, &a, &b, v)?;
                let mut row = ReportRow::new(t, seed);
                row.set("a", format_set(&g, &a))
                    .set("b", format_set(&g, &b))
                    .set("v", g.element(v).to_string());
                row.check(BoundCheck::new(
                    "compression-inequality",
                    "|C_v(A)-C_v(B)| <= |C_v(A-B)|",
                    chk.lhs as f64,
                    chk.rhs as f64,
                    chk.holds,
                    true,
                ));
                Ok(row)
            })?
        }
        other => bail!("unknown compress mode {other:?} (star, inequality)"),
    };
    Ok(Report::new("compress", rows))
}

fn fminus_row(g: &GroupSpec, a: &[usize], t: usize, seed: u64) -> Result<ReportRow> {
    let chk = fminus_bound_check(g, a)?;
    let k = *chk.k.numer() as f64 / *chk.k.denom() as f64;
    let span: f64 = chk.span_size.to_string().parse().unwrap_or(f64::INFINITY);
    let mut row = ReportRow::new(t, seed);
    row.set("set", format_set(g, a))
        .set("size", chk.size)
        .set("diff", chk.diff)
        .set("k", chk.k.to_string())
        .set("span", chk.span_size.to_string());
    row.check(BoundCheck::new(
        "fminus",
        "|<A>|/|A| <= p^K/(K+2)",
        span / chk.size as f64,
        (chk.p as f64).powf(k) / (k + 2.0),
        chk.holds,
        true,
    ));
    Ok(row)
}

fn check_fminus(cfg: &ExperimentConfig) -> Result<Report> {
    let g = group_or(cfg, "F3^2")?;
    let order = g.order();
    let exhaustive: bool = cfg.param("exhaustive", false)?;
    let rows = if exhaustive {
        if order > 20 {
            bail!("exhaustive check over {order} elements is too large");
        }
        run_indexed(cfg, (1usize << order) - 1, |t, _| {
            let mask = t + 1;
            let a: Vec<usize> = (0..order).filter(|&x| mask >> x & 1 == 1).collect();
            fminus_row(&g, &a, t, mask as u64)
        })?
    } else {
        run_trials(cfg, |t, seed| {
            let mut r = rng::stream(seed, 0, "fminus-size");
            let n = random_size(&mut r, 1, order);
            let a = random_subset(order, n, seed, "fminus-set")?;
            fminus_row(&g, &a, t, seed)
        })?
    };
    Ok(Report::new("check-fminus", rows))
}

fn z5d_ramsey(cfg: &ExperimentConfig) -> Result<Report> {
    let g = match &cfg.group {
        Some(text) => parse_group(text)?,
        None => GroupSpec::vector_space(5, cfg.param("d", 4)?)?,
    };
    let rows = run_trials(cfg, |t, seed| {
        let s = Sampler::Z5d.sample(&g, seed)?;
        let graph = build_cayley(&g, &s);
        let mut row = ReportRow::new(t, seed);
        row.set("group", g.to_string()).set("size", s.len());
        row.check(BoundCheck::holds(
            "self-complementary",
            "x -> 2x maps Cay(S) onto its complement",
            verify_self_complementary(&graph, &g, 2),
            true,
        ));
        row.check(BoundCheck::holds("x-or-2x", "exactly one of x, 2x in S", one_of_x_or_2x(&g, &s), true));
        clique_pair(cfg, &g, &s, &mut row, true, true)?;
        Ok(row)
    })?;
    Ok(Report::new("z5d-ramsey", rows))
}

fn coprime6_ramsey(cfg: &ExperimentConfig) -> Result<Report> {
    let g = group_or(cfg, "Z35")?;
    let with_clique: bool = cfg.param("clique", false)?;
    let rows = run_trials(cfg, |t, seed| {
        let s = Sampler::Coprime6.sample(&g, seed)?;
        let mut row = ReportRow::new(t, seed);
        row.set("group", g.to_string()).set("size", s.len());
        let quad = find_doubling_quadruple(&g, &s);
        if let Some(y) = quad {
            row.set("quadruple", g.element(y).to_string());
        }
        row.check(BoundCheck::holds("quadruple-free", "no y with y, 2y, 4y, 8y in S", quad.is_none(), true));
        if with_clique {
            clique_pair(cfg, &g, &s, &mut row, false, false)?;
        }
        Ok(row)
    })?;
    let mut report = Report::new("coprime6-ramsey", rows);
    report.summary.push(class_symmetry(cfg, &g, Sampler::Coprime6)?);
    Ok(report)
}

fn rcoloring(cfg: &ExperimentConfig) -> Result<Report> {
    let g = group_or(cfg, "F13^2")?;
    let r: usize = cfg.param("r", 2)?;
    let ell: Option<usize> = match cfg.param_str("ell") {
        Some(v) => Some(v.parse().map_err(|_| anyhow!("ell = {v:?} is not a number"))?),
        None => None,
    };
    let with_clique: bool = cfg.param("clique", true)?;
    let rows = run_trials(cfg, |t, seed| {
        let (c, branch) = rotational_coloring(&g, r, ell, seed)?;
        let (alpha, _) = c.rotation.ok_or_else(|| anyhow!("coloring carries no rotation"))?;
        let mut row = ReportRow::new(t, seed);
        let sizes: Vec<String> = c.class_sizes().iter().map(|s| s.to_string()).collect();
        row.set("group", g.to_string())
            .set("r", r)
            .set("alpha", alpha)
            .set(
                "branch",
                match branch {
                    RotationalBranch::SmallP => "small-p",
                    RotationalBranch::LargeP => "large-p",
                },
            )
            .set("class_sizes", sizes.join(" "));
        row.check(BoundCheck::holds("partition", "classes partition G minus 0", c.verify_partition(&g), true));
        row.check(BoundCheck::holds("rotation", "c(alpha x) = c(x) + 1 mod r", c.verify_rotation(&g), true));
        row.check(BoundCheck::holds(
            "isomorphic-classes",
            "x -> alpha x maps class i onto class i+1",
            verify_classes_isomorphic(&g, &c),
            true,
        ));
        if r == 2 {
            let graph = build_cayley(&g, &c.class(0));
            row.check(BoundCheck::holds(
                "self-complementary",
                "x -> alpha x maps Cay(class 0) onto its complement",
                verify_self_complementary(&graph, &g, alpha),
                true,
            ));
        }
        if with_clique {
            let opts = solver(cfg);
            let mut best = 0;
            let mut exact = true;
            for i in 0..r {
                let cert = cayley_clique_number(&g, &c.class(i), opts);
                exact &= cert.maximum;
                best = best.max(cert.size());
            }
            if !exact {
                row.flag("inexact");
            }
            row.set("mono_clique", best);
            row.check(BoundCheck::le(
                "mono-clique-ceiling",
                "max_i omega(class i) <= 4 log2 N",
                best as f64,
                clique_ceiling(g.order()),
                exact,
            ));
        }
        Ok(row)
    })?;
    Ok(Report::new("rcoloring", rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_contains_140() {
        let report = run(&ExperimentConfig::new("count").with_group("F2^4")).unwrap();
        let row = report.rows.iter().find(|r| r.get_f64("m") == Some(4.0)).unwrap();
        assert_eq!(row.get("at_most").unwrap(), "140");
        assert!(!report.failed());
    }

    #[test]
    fn unknown_verb_is_usage_error() {
        assert!(run(&ExperimentConfig::new("nope")).is_err());
        let bad = ExperimentConfig::new("tree").with_param("host", "moon");
        assert!(run(&bad).is_err());
    }

    #[test]
    fn cayley_clique_helper() {
        let g = parse_group("Z13").unwrap();
        let s = SymmetricSet::from_elements(&g, &[1, 3, 4, 9, 10, 12]).unwrap();
        assert!(is_cayley_clique(&g, &s, &[0, 1, 4]));
        assert!(!is_cayley_clique(&g, &s, &[0, 1, 2]));
    }

    #[test]
    fn growth_check_is_exact() {
        let g = parse_group("Z100").unwrap();
        let c = growth_check(&g, "x", &[0, 1]).unwrap().unwrap();
        assert!(c.pass);
        assert!(growth_check(&g, "x", &[0]).unwrap().is_none());
        let c = growth_check(&g, "x", &[0, 1, 2, 3, 4, 5, 6, 7]).unwrap().unwrap();
        assert_eq!(c.lhs, 15.0);
        assert!(!c.pass);
    }

    #[test]
    fn small_runs_pass() {
        for cfg in [
            ExperimentConfig::new("z5d-ramsey").with_group("Z5^2").with_trials(3),
            ExperimentConfig::new("coprime6-ramsey").with_group("Z35").with_trials(50),
            ExperimentConfig::new("rcoloring").with_group("F5^2").with_trials(2),
            ExperimentConfig::new("span").with_group("Z3xZ64").with_trials(3),
            ExperimentConfig::new("dimension").with_group("F3^4").with_param("n", 20).with_trials(3),
            ExperimentConfig::new("compress").with_group("F3^2").with_trials(5),
            ExperimentConfig::new("tree").with_param("n", 16).with_trials(2),
            ExperimentConfig::new("sample").with_group("Z35").with_trials(4),
            ExperimentConfig::new("clique").with_group("F2^5").with_trials(2),
        ] {
            let report = run(&cfg).unwrap();
            assert_eq!(report.rows.len(), cfg.trials, "{}", cfg.experiment);
            assert!(!report.failed(), "{}: {:?}", cfg.experiment, report.failures());
        }
    }

    #[test]
    fn exhaustive_fminus_covers_every_subset() {
        let cfg = ExperimentConfig::new("check-fminus").with_group("F3").with_param("exhaustive", true);
        let report = run(&cfg).unwrap();
        assert_eq!(report.rows.len(), 7);
    }
}
