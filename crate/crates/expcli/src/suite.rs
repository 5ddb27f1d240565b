//! The acceptance criteria, each run through the experiment verbs with fixed
//! master seeds.

use anyhow::{bail, Result};
use rand::Rng;
use ramsey_core::cayley::{build_cayley, cayley_clique_number, SymmetricSet};
use ramsey_core::clique::{independence_number, max_clique, subgroup_clique_bound, DenseGraph, SolverOptions};
use ramsey_core::coloring::{difference_coloring, sample_entangled};
use ramsey_core::{rng, GroupSpec};

use crate::config::ExperimentConfig;
use crate::experiments::run;
use crate::report::Report;
use crate::util::{median, trial_seed};

pub const IDS: std::ops::RangeInclusive<u8> = 1..=12;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub summary: String,
    pub details: Vec<String>,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {}: {} {} ({})",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.title,
            self.summary
        )
    }
}

pub fn title(id: u8) -> &'static str {
    match id {
        1 => "greedy span bound",
        2 => "spanning tree color bound",
        3 => "hard-instance color floor",
        4 => "ball-process tail",
        5 => "Z5^d self-complementary Ramsey graphs",
        6 => "coprime-6 construction",
        7 => "small-doubling counts",
        8 => "dimension witness",
        9 => "compression and F-minus suite",
        10 => "rotational colorings",
        11 => "clique solver oracle",
        12 => "entangled-graph clique sanity",
        _ => "unknown",
    }
}

/// Run one criterion. `workers` sizes the trial pool.
pub fn criterion(id: u8, workers: usize) -> Result<Outcome> {
    let mut ctx = Ctx {
        workers: workers.max(1),
        details: Vec::new(),
    };
    let (pass, summary) = match id {
        1 => c1(&mut ctx)?,
        2 => c2(&mut ctx)?,
        3 => c3(&mut ctx)?,
        4 => c4(&mut ctx)?,
        5 => c5(&mut ctx)?,
        6 => c6(&mut ctx)?,
        7 => c7(&mut ctx)?,
        8 => c8(&mut ctx)?,
        9 => c9(&mut ctx)?,
        10 => c10(&mut ctx)?,
        11 => c11(&mut ctx)?,
        12 => c12(&mut ctx)?,
        _ => bail!("no criterion {id} (1..=12)"),
    };
    Ok(Outcome {
        id,
        title: title(id),
        pass,
        summary,
        details: ctx.details,
    })
}

pub fn run_all(ids: &[u8], workers: usize) -> Result<Vec<Outcome>> {
    ids.iter().map(|&id| criterion(id, workers)).collect()
}

struct Ctx {
    workers: usize,
    details: Vec<String>,
}

impl Ctx {
    fn cfg(&self, verb: &str, seed: u64) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(verb).with_seed(seed);
        c.workers = self.workers;
        c
    }

    /// Run and record the digest plus up to five failures.
    fn run(&mut self, label: &str, cfg: &ExperimentConfig) -> Result<Report> {
        let report = run(cfg)?;
        self.details.push(format!("[{label}] {}", report.digest().trim_end()));
        for (trial, c) in report.failures().into_iter().take(5) {
            let at = trial.map_or("summary".to_string(), |t| format!("trial {t}"));
            self.details
                .push(format!("    {at}: {} failed, lhs {} vs rhs {}", c.name, c.lhs, c.rhs));
        }
        Ok(report)
    }
}

fn c1(ctx: &mut Ctx) -> Result<(bool, String)> {
    let cfg = ctx
        .cfg("span", 101)
        .with_group("random")
        .with_param("sizes", "64,256,512")
        .with_param("max_order", 4096)
        .with_trials(100);
    let r = ctx.run("span", &cfg)?;
    let (p, t) = r.count_passing("span-bound");
    Ok((!r.failed() && t == 100, format!("{p}/{t} within 6 K ln n")))
}

fn c2(ctx: &mut Ctx) -> Result<(bool, String)> {
    let rainbow = ctx
        .cfg("tree", 201)
        .with_param("host", "rainbow")
        .with_param("sizes", "32,128")
        .with_trials(2);
    let diff = ctx
        .cfg("tree", 202)
        .with_param("host", "difference")
        .with_group("random")
        .with_param("sizes", "64,256,512")
        .with_trials(100);
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, cfg) in [("rainbow", rainbow), ("difference", diff)] {
        let r = ctx.run(label, &cfg)?;
        let (p, t) = r.count_passing("tree-bound");
        pass &= !r.failed() && t == cfg.trials;
        parts.push(format!("{label} {p}/{t}"));
    }
    for k in [2.0, 4.0] {
        let cfg = ctx.cfg("tree", 203).with_param("host", "hard").with_param("n", 4096).with_param("k", k);
        let r = ctx.run(&format!("hard K={k}"), &cfg)?;
        let (p, t) = r.count_passing("tree-bound");
        pass &= p == t && t == 1 && r.count_passing("certificate") == (1, 1);
        parts.push(format!("hard K={k} {p}/{t}"));
    }
    Ok((pass, parts.join(", ")))
}

fn c3(ctx: &mut Ctx) -> Result<(bool, String)> {
    let cfg = ctx
        .cfg("tree", 301)
        .with_param("host", "hard")
        .with_param("n", 4096)
        .with_param("k", 4)
        .with_trials(10);
    let r = ctx.run("hard K=4", &cfg)?;
    let (p, _) = r.count_passing("instance-floor");
    let pass = r.summary.iter().all(|c| c.pass) && !r.summary.is_empty();
    Ok((pass, format!("floor met in {p}/10 seeds")))
}

fn c4(ctx: &mut Ctx) -> Result<(bool, String)> {
    let cfg = ctx
        .cfg("growth-sim", 401)
        .with_group("Z2^12")
        .with_param("n", 512)
        .with_param("k", 64)
        .with_param("vertices", 200);
    let r = ctx.run("growth-sim", &cfg)?;
    let row = &r.rows[0];
    let traced = row.get_f64("traced").unwrap_or(0.0);
    let exceeded = row.get_f64("exceeded").unwrap_or(f64::NAN);
    let pass = !r.failed() && traced >= 200.0 && !row.has_flag("fallback");
    Ok((pass, format!("T_J > 900K for {exceeded}/{traced} vertices")))
}

fn c5(ctx: &mut Ctx) -> Result<(bool, String)> {
    let cfg = ctx.cfg("z5d-ramsey", 501).with_param("d", 4).with_trials(20);
    let r = ctx.run("z5d-ramsey", &cfg)?;
    let exact = r.rows.iter().all(|row| !row.has_flag("inexact"));
    let max = |k: &str| r.rows.iter().filter_map(|row| row.get_f64(k)).fold(0.0, f64::max);
    Ok((
        !r.failed() && exact && r.rows.len() == 20,
        format!("max clique {}, max independence {}, all exact: {exact}", max("clique"), max("independence")),
    ))
}

fn c6(ctx: &mut Ctx) -> Result<(bool, String)> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, g) in ["Z35", "Z5xZ25", "Z7^3"].into_iter().enumerate() {
        let cfg = ctx.cfg("coprime6-ramsey", 601 + i as u64).with_group(g).with_trials(1000);
        let r = ctx.run(g, &cfg)?;
        let (p, t) = r.count_passing("quadruple-free");
        pass &= !r.failed() && t == 1000 && !r.summary.is_empty();
        parts.push(format!("{g} {p}/{t}"));
    }
    Ok((pass, parts.join(", ")))
}

fn c7(ctx: &mut Ctx) -> Result<(bool, String)> {
    let base = ctx.cfg("count", 701).with_group("F2^4").with_param("n", 4).with_param("m", 4);
    let r = ctx.run("F2^4 n=4", &base)?;
    let at4 = r
        .rows
        .iter()
        .find(|row| row.get_f64("m") == Some(4.0))
        .and_then(|row| row.get("at_most").and_then(|v| v.as_str()).map(str::to_string));
    let mut pass = !r.failed() && at4.as_deref() == Some("140");
    for (g, n) in [("F2^4", 2), ("F2^4", 3), ("F2^4", 5), ("F2^4", 6), ("Z3^2", 3), ("Z3^2", 4), ("Z12", 5)] {
        let cfg = ctx.cfg("count", 702).with_group(g).with_param("n", n);
        let r = ctx.run(&format!("{g} n={n}"), &cfg)?;
        pass &= !r.failed();
    }
    Ok((pass, format!("count(F2^4, n=4, m=4) = {}", at4.unwrap_or_default())))
}

fn c8(ctx: &mut Ctx) -> Result<(bool, String)> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, g) in ["Z4093", "F3^5"].into_iter().enumerate() {
        let cfg = ctx.cfg("dimension", 801 + i as u64).with_group(g).with_param("n", 128).with_trials(50);
        let r = ctx.run(g, &cfg)?;
        let (p, t) = r.count_passing("dimension-bound");
        let (q, _) = r.count_passing("containment");
        pass &= !r.failed() && t == 50;
        parts.push(format!("{g}: bound {p}/{t}, replay {q}/{t}"));
    }
    Ok((pass, parts.join(", ")))
}

fn c9(ctx: &mut Ctx) -> Result<(bool, String)> {
    let mut a_pass = true;
    let mut a_parts = Vec::new();
    for (i, g) in ["F3^2", "F5^2"].into_iter().enumerate() {
        let cfg = ctx
            .cfg("compress", 901 + i as u64)
            .with_group(g)
            .with_param("mode", "inequality")
            .with_trials(10_000);
        let r = ctx.run(&format!("(a) {g}"), &cfg)?;
        let (p, t) = r.count_passing("compression-inequality");
        a_pass &= p == t && t == 10_000;
        a_parts.push(format!("{g} {p}/{t}"));
    }
    let mut b_pass = true;
    let mut b_parts = Vec::new();
    let exhaustive = ctx.cfg("check-fminus", 903).with_group("F3^2").with_param("exhaustive", true);
    let r = ctx.run("(b) F3^2 exhaustive", &exhaustive)?;
    let (p, t) = r.count_passing("fminus");
    b_pass &= p == t && t == 511;
    b_parts.push(format!("F3^2 {p}/{t}"));
    for (i, g) in ["F5^2", "F3^3"].into_iter().enumerate() {
        let cfg = ctx.cfg("check-fminus", 904 + i as u64).with_group(g).with_trials(10_000);
        let r = ctx.run(&format!("(b) {g}"), &cfg)?;
        let (p, t) = r.count_passing("fminus");
        b_pass &= p == t && t == 10_000;
        b_parts.push(format!("{g} {p}/{t}"));
    }
    let mut c_pass = true;
    let mut c_parts = Vec::new();
    for (i, g) in ["F3^2", "F5^2", "F3^3", "F7^2"].into_iter().enumerate() {
        let cfg = ctx.cfg("compress", 906 + i as u64).with_group(g).with_trials(500);
        let r = ctx.run(&format!("(c) {g}"), &cfg)?;
        c_pass &= !r.failed() && r.rows.len() == 500;
        let (p, t) = r.count_passing("no-growth");
        c_parts.push(format!("{g} {p}/{t}"));
    }
    let pass = a_pass && b_pass && c_pass;
    let mark = |b: bool| if b { "pass" } else { "FAIL" };
    Ok((
        pass,
        format!(
            "(a) {} [{}]; (b) {} [{}]; (c) {} [{}]",
            mark(a_pass),
            a_parts.join(", "),
            mark(b_pass),
            b_parts.join(", "),
            mark(c_pass),
            c_parts.join(", ")
        ),
    ))
}

fn c10(ctx: &mut Ctx) -> Result<(bool, String)> {
    let two = ctx.cfg("rcoloring", 1001).with_group("F13^2").with_param("r", 2).with_trials(20);
    let r2 = ctx.run("F13^2 r=2", &two)?;
    let three = ctx.cfg("rcoloring", 1002).with_group("F7^2").with_param("r", 3).with_trials(20);
    let r3 = ctx.run("F7^2 r=3", &three)?;
    let exact = r2.rows.iter().all(|row| !row.has_flag("inexact"));
    let worst = r2.rows.iter().filter_map(|row| row.get_f64("mono_clique")).fold(0.0, f64::max);
    let (iso, t3) = r3.count_passing("isomorphic-classes");
    Ok((
        !r2.failed() && !r3.failed() && exact && r2.rows.len() == 20 && t3 == 20,
        format!("r=2 worst monochromatic clique {worst}; r=3 isomorphic {iso}/{t3}"),
    ))
}

/// Maximum clique by enumerating every clique once (no pruning).
fn brute_force_clique(adj: &[u32]) -> usize {
    fn rec(adj: &[u32], cand: u32, size: usize, best: &mut usize) {
        *best = (*best).max(size);
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            rec(adj, rest & adj[v], size + 1, best);
        }
    }
    let n = adj.len();
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut best = 0;
    rec(adj, all, 0, &mut best);
    best
}

fn c11(ctx: &mut Ctx) -> Result<(bool, String)> {
    let mut agree = 0;
    let mut ind_agree = 0;
    for i in 0..200u64 {
        let mut r = rng::stream(1101, i, "criterion-11-graph");
        let n = r.gen_range(1..=24usize);
        let p: f64 = r.gen_range(0.05..0.95);
        let mut g = DenseGraph::new(n);
        let mut adj = vec![0u32; n];
        for u in 0..n {
            for v in u + 1..n {
                if r.gen_bool(p) {
                    g.add_edge(u, v);
                    adj[u] |= 1 << v;
                    adj[v] |= 1 << u;
                }
            }
        }
        let comp: Vec<u32> = (0..n).map(|u| !adj[u] & !(1 << u) & ((1u64 << n) - 1) as u32).collect();
        let solver = max_clique(&g);
        if solver.size() == brute_force_clique(&adj) && solver.maximum {
            agree += 1;
        } else {
            ctx.details.push(format!("graph {i}: solver {} vs brute force {}", solver.size(), brute_force_clique(&adj)));
        }
        let ind = independence_number(&g).size();
        if ind == max_clique(&g.complement()).size() && ind == brute_force_clique(&comp) {
            ind_agree += 1;
        }
    }
    let z13: GroupSpec = "Z13".parse()?;
    let qr = SymmetricSet::from_elements(&z13, &[1, 3, 4, 9, 10, 12])?;
    let paley = max_clique(&build_cayley(&z13, &qr)).size();
    let paley_t = cayley_clique_number(&z13, &qr, SolverOptions::default()).size();
    ctx.details.push(format!("Paley(13): solver {paley}, transitive {paley_t}"));
    Ok((
        agree == 200 && ind_agree == 200 && paley == 3 && paley_t == 3,
        format!("clique {agree}/200, independence {ind_agree}/200, Paley(13) = {paley}"),
    ))
}

fn c12(ctx: &mut Ctx) -> Result<(bool, String)> {
    let g = GroupSpec::vector_space(2, 10)?;
    let all: Vec<usize> = (0..g.order()).collect();
    let gc = difference_coloring(&g, &all)?;
    let opts = SolverOptions {
        node_budget: Some(200_000_000),
        workers: 1,
    };
    let mut pass = true;
    let mut cliques = Vec::new();
    for t in 0..5 {
        let seed = trial_seed(1201, t);
        let ent = sample_entangled(&gc.coloring, 0.5, seed)?;
        let elems: Vec<usize> = ent.colors().iter().map(|&c| gc.color_elements[c]).collect();
        let s = SymmetricSet::from_elements(&g, &elems)?;
        let cert = cayley_clique_number(&g, &s, opts);
        let in_graph = cert
            .vertices
            .iter()
            .enumerate()
            .all(|(i, &x)| cert.vertices[i + 1..].iter().all(|&y| ent.has_edge(x, y)));
        let h = subgroup_clique_bound(&g, &s, g.rank());
        let lower_ok = cert.size() >= h.elements.len();
        let upper_ok = !cert.maximum || cert.size() <= 120;
        pass &= in_graph && lower_ok && upper_ok;
        if cert.maximum {
            cliques.push(cert.size() as f64);
        }
        ctx.details.push(format!(
            "sample {t}: |S| = {}, clique {}{}, subgroup witness {} (dim {:?}), nodes {}",
            s.len(),
            cert.size(),
            if cert.maximum { "" } else { " (budget hit, lower bound)" },
            h.elements.len(),
            h.dim,
            cert.nodes
        ));
    }
    let med = median(&mut cliques);
    Ok((
        pass,
        format!(
            "median exact clique {} over {} exact samples",
            med.map_or("n/a".to_string(), |m| m.to_string()),
            cliques.len()
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_small() {
        assert_eq!(brute_force_clique(&[]), 0);
        assert_eq!(brute_force_clique(&[0]), 1);
        // triangle plus a pendant vertex
        assert_eq!(brute_force_clique(&[0b0110, 0b1101, 0b0011, 0b0010]), 3);
        let k5: Vec<u32> = (0..5).map(|v| 0b11111 & !(1 << v)).collect();
        assert_eq!(brute_force_clique(&k5), 5);
    }

    #[test]
    fn unknown_criterion() {
        assert!(criterion(13, 1).is_err());
    }
}
