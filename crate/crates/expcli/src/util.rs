use anyhow::{anyhow, bail, Result};
use rand::seq::index::sample;
use rand::Rng;
use ramsey_core::cayley::{Sampler, SymmetricSet};
use ramsey_core::{rng, GroupSpec};

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one trial. For a fixed master seed this is a bijection of the
/// trial index, so trials never share a seed.
pub fn trial_seed(master: u64, trial: usize) -> u64 {
    splitmix(master ^ splitmix(trial as u64))
}

/// A uniformly random `size`-subset of `0..order`, sorted.
pub fn random_subset(order: usize, size: usize, seed: u64, label: &str) -> Result<Vec<usize>> {
    if size > order {
        bail!("cannot pick {size} elements from a group of order {order}");
    }
    let mut r = rng::stream(seed, 0, label);
    let mut v = sample(&mut r, order, size).into_vec();
    v.sort_unstable();
    Ok(v)
}

/// A random finite abelian group with order in `lo..=hi`, as a product of one
/// to three cyclic factors.
pub fn random_group(seed: u64, lo: usize, hi: usize) -> Result<GroupSpec> {
    if lo > hi || hi < 2 {
        bail!("no group order in {lo}..={hi}");
    }
    let mut r = rng::stream(seed, 0, "random-group");
    loop {
        let rank = r.gen_range(1..=3u32);
        let cap = (hi as f64).powf(1.0 / rank as f64).floor().max(2.0) as u64;
        let factors: Vec<u64> = (0..rank).map(|_| r.gen_range(2..=cap)).collect();
        let order: u64 = factors.iter().product();
        if (lo as u64..=hi as u64).contains(&order) {
            return Ok(GroupSpec::new(factors)?);
        }
    }
}

pub fn parse_group(text: &str) -> Result<GroupSpec> {
    text.parse().map_err(|e| anyhow!("group {text:?}: {e}"))
}

/// `uniform:<p>`, `z5d` or `coprime6`.
pub fn parse_sampler(text: &str) -> Result<Sampler> {
    match text.split_once(':') {
        Some(("uniform", p)) => {
            let p: f64 = p.parse().map_err(|_| anyhow!("bad probability in sampler {text:?}"))?;
            Ok(Sampler::Uniform(p))
        }
        None if text == "uniform" => Ok(Sampler::Uniform(0.5)),
        None if text == "z5d" => Ok(Sampler::Z5d),
        None if text == "coprime6" => Ok(Sampler::Coprime6),
        _ => bail!("unknown sampler {text:?} (uniform:<p>, z5d, coprime6)"),
    }
}

/// Exactly one of `x`, `2x` lies in `S` for every nonzero `x`.
pub fn one_of_x_or_2x(g: &GroupSpec, s: &SymmetricSet) -> bool {
    (1..g.order()).all(|x| s.contains(x) != s.contains(g.mul_idx(2, x)))
}

/// Independent membership replay for a dimension witness: the set
/// `base + {Σ w_i s_i : w_i ∈ {−1, 0, 1}}` built by repeated translation.
pub fn signed_sums_contain(g: &GroupSpec, base: usize, seq: &[usize], a: &[usize]) -> bool {
    let mut reach = vec![false; g.order()];
    reach[base] = true;
    let mut members = vec![base];
    for &s in seq {
        let mut next = members.clone();
        for &x in &members {
            for y in [g.add_idx(x, s), g.sub_idx(x, s)] {
                if !reach[y] {
                    reach[y] = true;
                    next.push(y);
                }
            }
        }
        members = next;
    }
    a.iter().all(|&x| reach[x])
}

/// `4 log2 N`, the clique ceiling used by the Ramsey experiments.
pub fn clique_ceiling(order: usize) -> f64 {
    4.0 * (order as f64).log2()
}

pub fn median(v: &mut [f64]) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { (v[m - 1] + v[m]) / 2.0 })
}
