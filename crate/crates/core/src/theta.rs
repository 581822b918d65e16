//! The space of stability parameters: walls, seeded generic sampling, and
//! the search for parameters realizing a prescribed resolution.
//!
//! Every draw comes from a ChaCha8 stream determined by the seed and a task
//! number, so results do not depend on thread scheduling.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::{build_mckay_quiver, is_generic, moduli_fan, non_generic_witness, McKayQuiver, Theta, MAX_ENUMERATION_ORDER};
use crate::rational::Rat;
use crate::surface::{enumerate_admissible_resolutions, maximal_resolution, AbelianAction, ActionSpec, Resolution};

pub const REPORT_SCHEMA: u32 = 1;
/// Largest group whose walls are listed explicitly.
pub const MAX_WALL_ORDER: usize = 20;
/// Fresh draws allowed before [`sample_generic`] gives up.
pub const SAMPLE_RETRIES: usize = 1000;
const DRAW_RANGE: i64 = 1 << 20;
const REALIZATION_STREAM: u64 = 1 << 40;
const POOL_LIMIT: usize = 64;
const MAX_REFLECTED_ENTRY: i64 = 1 << 40;

/// The hyperplane `θ(S) = 0`, recorded by the side `S` avoiding vertex 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Wall {
    pub subset: Vec<usize>,
}

impl Wall {
    pub fn value(&self, theta: &Theta) -> Rat {
        theta.subset_sum(&self.subset)
    }
}

fn subset_of_mask(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

pub fn walls(action: &AbelianAction) -> Result<Vec<Wall>> {
    let n = action.order();
    if n > MAX_WALL_ORDER {
        return Err(Error::TooLarge { order: n, limit: MAX_WALL_ORDER });
    }
    Ok((1u64..1 << (n - 1)).map(|m| Wall { subset: subset_of_mask(m) }).collect())
}

/// Signs of `θ(S)` for every wall, packed one bit per wall (set when positive).
pub fn sign_vector(theta: &Theta) -> Result<Vec<u64>> {
    let n = theta.len();
    if n > MAX_ENUMERATION_ORDER {
        return Err(Error::TooLarge { order: n, limit: MAX_ENUMERATION_ORDER });
    }
    let values = theta.scaled()?;
    let count = 1usize << (n - 1);
    let mut sums = vec![0i128; count];
    let mut bits = vec![0u64; count.div_ceil(64)];
    for mask in 1..count {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + values[low + 1];
        if sums[mask] > 0 {
            bits[mask / 64] |= 1 << (mask % 64);
        }
    }
    Ok(bits)
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `θ_i = n x_i - sum x` for integer draws `x`.
fn centred(xs: &[i64]) -> Vec<i64> {
    let n = xs.len() as i64;
    let total: i64 = xs.iter().sum();
    xs.iter().map(|x| n * x - total).collect()
}

fn to_theta(values: &[i64]) -> Theta {
    Theta::from_ints(values).expect("zero-sum by construction")
}

fn uniform_draw(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    let xs: Vec<i64> = (0..n).map(|_| rng.gen_range(0..DRAW_RANGE)).collect();
    centred(&xs)
}

/// Certified-generic θ from stream `stream` of `seed`.
pub fn sample_generic_stream(action: &AbelianAction, seed: u64, stream: u64) -> Result<Theta> {
    let n = action.order();
    let mut rng = stream_rng(seed, stream);
    for _ in 0..SAMPLE_RETRIES {
        let theta = to_theta(&uniform_draw(&mut rng, n));
        if non_generic_witness(&theta)?.is_none() {
            return Ok(theta);
        }
    }
    Err(Error::BudgetExhausted(SAMPLE_RETRIES))
}

pub fn sample_generic(action: &AbelianAction, seed: u64) -> Result<Theta> {
    sample_generic_stream(action, seed, 0)
}

fn reduce_by_gcd(values: &mut [i64]) {
    let g = values.iter().fold(0i64, |acc, v| acc.gcd(v));
    if g > 1 {
        values.iter_mut().for_each(|v| *v /= g);
    }
}

/// Reflects `base` across a nearby wall and perturbs slightly.
fn reflected_draw(rng: &mut ChaCha8Rng, base: &[i64]) -> Option<Vec<i64>> {
    let n = base.len();
    if n < 2 {
        return None;
    }
    let full = 1u64 << (n - 1);
    let mut best: Option<(u64, i128, i128)> = None;
    for _ in 0..8 {
        let mask = rng.gen_range(1..full);
        let s = subset_of_mask(mask);
        let k = s.len() as i128;
        let value: i128 = s.iter().map(|&i| base[i] as i128).sum();
        // squared distance to the wall, up to the common factor n
        let score = (value * value, k * (n as i128 - k));
        let better = match best {
            None => true,
            Some((_, v2, w)) => score.0 * w < v2 * score.1,
        };
        if better {
            best = Some((mask, score.0, score.1));
        }
    }
    let (mask, _, _) = best?;
    let inside: Vec<bool> = (0..n).map(|i| i > 0 && mask >> (i - 1) & 1 == 1).collect();
    let k = inside.iter().filter(|&&b| b).count() as i128;
    let rest = n as i128 - k;
    let value: i128 = (0..n).filter(|&i| inside[i]).map(|i| base[i] as i128).sum();
    let noise = centred(&(0..n).map(|_| rng.gen_range(0..16)).collect::<Vec<_>>());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let d = if inside[i] { rest } else { -k };
        let reflected = k * rest * base[i] as i128 - 2 * value * d;
        let v = 64 * reflected + noise[i] as i128;
        if v.abs() > MAX_REFLECTED_ENTRY as i128 {
            return None;
        }
        out.push(v as i64);
    }
    reduce_by_gcd(&mut out);
    Some(out)
}

fn spiked_draw(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    let spike = rng.gen_range(0..n);
    let mut values: Vec<i64> = (0..n).map(|_| rng.gen_range(1..DRAW_RANGE)).collect();
    values[spike] = 0;
    values[spike] = -values.iter().sum::<i64>();
    values
}

/// Outcome of a realization search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Realization {
    /// A certified-generic parameter whose moduli fan is the target, if found.
    pub theta: Option<Theta>,
    pub draws: usize,
    pub generic_rejections: usize,
    pub chambers_visited: usize,
    pub distinct_fans: usize,
}

impl Realization {
    pub fn is_found(&self) -> bool {
        self.theta.is_some()
    }
}

/// Seeded search for a generic θ with `moduli_fan(θ) = y`, mixing uniform
/// draws, draws with one negative spike, and reflections of earlier draws
/// across nearby walls. Exhausting the budget is reported, not an error.
pub fn realize_resolution(action: &AbelianAction, y: &Resolution, budget: usize, seed: u64) -> Result<Realization> {
    let n2 = action.n2();
    y.validate(&n2)?;
    if let Some((v, _)) = y.exceptional().iter().zip(y.discrepancies()).find(|(_, a)| a.is_positive()) {
        return Err(Error::NotDominated(v.to_string()));
    }
    let q = build_mckay_quiver(action);
    let n = q.order();
    if n > MAX_ENUMERATION_ORDER {
        return Err(Error::TooLarge { order: n, limit: MAX_ENUMERATION_ORDER });
    }
    let mut rng = stream_rng(seed, REALIZATION_STREAM);
    let mut chambers: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut fans: Vec<Resolution> = Vec::new();
    let mut pool: Vec<Vec<i64>> = Vec::new();
    let mut report = Realization { theta: None, draws: 0, generic_rejections: 0, chambers_visited: 0, distinct_fans: 0 };
    for draw in 0..budget {
        report.draws = draw + 1;
        let values = match draw % 3 {
            1 => spiked_draw(&mut rng, n),
            2 if !pool.is_empty() => {
                let base = pool[rng.gen_range(0..pool.len())].clone();
                reflected_draw(&mut rng, &base).unwrap_or_else(|| uniform_draw(&mut rng, n))
            }
            _ => uniform_draw(&mut rng, n),
        };
        let theta = to_theta(&values);
        if !is_generic(&theta) {
            report.generic_rejections += 1;
            continue;
        }
        let signs = sign_vector(&theta)?;
        let fan_index = match chambers.get(&signs) {
            Some(&i) => i,
            None => {
                let fan = moduli_fan(&q, &theta)?;
                let i = fans.iter().position(|f| *f == fan).unwrap_or_else(|| {
                    fans.push(fan);
                    fans.len() - 1
                });
                chambers.insert(signs, i);
                if pool.len() < POOL_LIMIT {
                    pool.push(values.clone());
                }
                i
            }
        };
        if fans[fan_index] == *y {
            report.theta = Some(theta);
            break;
        }
    }
    report.chambers_visited = chambers.len();
    report.distinct_fans = fans.len();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanCount {
    pub resolution: Resolution,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub sample: usize,
    pub theta: Theta,
    pub detail: String,
}

/// Generic samples must yield fans whose rays all lie in `alpha + beta <= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnlyIfAudit {
    pub samples: usize,
    pub distinct_fans: Vec<FanCount>,
    pub violations: Vec<Violation>,
}

/// Samples sharing a sign vector on every wall must share a fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberAudit {
    pub chambers: usize,
    pub pairs_checked: usize,
    pub mismatches: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationEntry {
    pub resolution: Resolution,
    pub seed: u64,
    pub realization: Realization,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub only_if_holds: bool,
    pub chambers_consistent: bool,
    pub all_realized: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationReport {
    pub schema: u32,
    pub action: ActionSpec,
    pub seed: u64,
    pub budget: usize,
    pub only_if: OnlyIfAudit,
    pub chamber_constancy: ChamberAudit,
    pub realizations: Vec<RealizationEntry>,
    pub verdict: Verdict,
}

impl RealizationReport {
    pub fn realized_count(&self) -> usize {
        self.realizations.iter().filter(|r| r.realization.is_found()).count()
    }
}

fn audit_sample(q: &McKayQuiver, max: &Resolution, action: &AbelianAction, seed: u64, i: usize) -> Result<(Theta, Vec<u64>, std::result::Result<Resolution, String>)> {
    let theta = sample_generic_stream(action, seed, i as u64)?;
    let signs = sign_vector(&theta)?;
    let fan = match moduli_fan(q, &theta) {
        Ok(fan) => match fan.exceptional().iter().find(|r| !max.rays().contains(r)) {
            None => Ok(fan),
            Some(r) => Err(format!("ray {r} lies outside the maximal resolution")),
        },
        Err(e) => Err(e.to_string()),
    };
    Ok((theta, signs, fan))
}

/// Runs the "only if" audit on `samples` generic parameters and searches for
/// a realizing parameter for every admissible resolution.
pub fn verify_main_theorem(action: &AbelianAction, samples: usize, budget: usize, seed: u64) -> Result<RealizationReport> {
    let q = build_mckay_quiver(action);
    if q.order() > MAX_ENUMERATION_ORDER {
        return Err(Error::TooLarge { order: q.order(), limit: MAX_ENUMERATION_ORDER });
    }
    let n2 = action.n2();
    let max = maximal_resolution(&n2);
    let drawn: Vec<_> = (0..samples)
        .into_par_iter()
        .map(|i| audit_sample(&q, &max, action, seed, i))
        .collect::<Result<_>>()?;

    let mut distinct: Vec<FanCount> = Vec::new();
    let mut violations = Vec::new();
    let mut chambers: HashMap<&[u64], usize> = HashMap::new();
    let mut chamber_audit = ChamberAudit { chambers: 0, pairs_checked: 0, mismatches: Vec::new() };
    for (i, (theta, signs, fan)) in drawn.iter().enumerate() {
        match fan {
            Ok(fan) => {
                match distinct.iter_mut().find(|f| f.resolution == *fan) {
                    Some(f) => f.count += 1,
                    None => distinct.push(FanCount { resolution: fan.clone(), count: 1 }),
                }
                match chambers.get(signs.as_slice()) {
                    Some(&first) => {
                        chamber_audit.pairs_checked += 1;
                        if drawn[first].2.as_ref().ok() != Some(fan) {
                            chamber_audit.mismatches.push([first, i]);
                        }
                    }
                    None => {
                        chambers.insert(signs, i);
                    }
                }
            }
            Err(detail) => violations.push(Violation { sample: i, theta: theta.clone(), detail: detail.clone() }),
        }
    }
    chamber_audit.chambers = chambers.len();

    let admissible = enumerate_admissible_resolutions(&n2)?;
    let realizations: Vec<RealizationEntry> = admissible
        .into_par_iter()
        .enumerate()
        .map(|(k, y)| {
            let s = seed.wrapping_add(k as u64 + 1);
            realize_resolution(action, &y, budget, s).map(|realization| RealizationEntry { resolution: y, seed: s, realization })
        })
        .collect::<Result<_>>()?;

    let only_if_holds = violations.is_empty();
    let chambers_consistent = chamber_audit.mismatches.is_empty();
    let all_realized = realizations.iter().all(|r| r.realization.is_found());
    Ok(RealizationReport {
        schema: REPORT_SCHEMA,
        action: action.spec(),
        seed,
        budget,
        only_if: OnlyIfAudit { samples, distinct_fans: distinct, violations },
        chamber_constancy: chamber_audit,
        realizations,
        verdict: Verdict {
            only_if_holds,
            chambers_consistent,
            all_realized,
            passed: only_if_holds && chambers_consistent && all_realized,
        },
    })
}
