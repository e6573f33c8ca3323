//! Per-link delivery delays: uniform, explicit matrix, sampled, or a matrix
//! generated from latency percentiles. Self-links are ordinary links.

use crate::TimeUs;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DelayModelCfg {
    Uniform {
        delta: TimeUs,
    },
    PerLink {
        matrix: Vec<Vec<TimeUs>>,
    },
    Sampled {
        dist: SampledDist,
        seed: u64,
    },
    /// One-way latency percentiles (50th/70th/90th) expanded into a fixed
    /// per-link matrix with a seeded piecewise-linear inverse CDF.
    GeoPercentile {
        p50: TimeUs,
        p70: TimeUs,
        p90: TimeUs,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "snake_case")]
pub enum SampledDist {
    UniformRange { lo: TimeUs, hi: TimeUs },
    LogNormal { median: TimeUs, sigma_milli: u32 },
}

#[derive(Debug)]
pub(crate) enum DelayModel {
    Uniform(TimeUs),
    Matrix(Vec<Vec<TimeUs>>),
    Sampled { dist: SampledDist, seed: u64 },
}

impl DelayModel {
    pub fn build(cfg: &DelayModelCfg, n: usize) -> Result<Self, String> {
        match cfg {
            DelayModelCfg::Uniform { delta } => {
                if *delta == 0 {
                    return Err("uniform delay must be positive".into());
                }
                Ok(DelayModel::Uniform(*delta))
            }
            DelayModelCfg::PerLink { matrix } => {
                if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
                    return Err(format!("delay matrix must be {n}x{n}"));
                }
                if matrix.iter().flatten().any(|&d| d == 0) {
                    return Err("per-link delays must be positive".into());
                }
                Ok(DelayModel::Matrix(matrix.clone()))
            }
            DelayModelCfg::Sampled { dist, seed } => {
                match dist {
                    SampledDist::UniformRange { lo, hi } => {
                        if *lo == 0 || hi < lo {
                            return Err("sampled range needs 0 < lo <= hi".into());
                        }
                    }
                    SampledDist::LogNormal { median, .. } => {
                        if *median == 0 {
                            return Err("log-normal median must be positive".into());
                        }
                    }
                }
                Ok(DelayModel::Sampled {
                    dist: *dist,
                    seed: *seed,
                })
            }
            DelayModelCfg::GeoPercentile { p50, p70, p90, seed } => {
                if !(0 < *p50 && p50 <= p70 && p70 <= p90) {
                    return Err("percentiles must be positive and ordered".into());
                }
                let mut matrix = vec![vec![0; n]; n];
                #[allow(clippy::needless_range_loop)]
                for i in 0..n {
                    for j in 0..n {
                        let u = unit_from_key(mix(*seed, (i as u64) << 32 | j as u64));
                        matrix[i][j] = percentile_curve(u, *p50, *p70, *p90);
                    }
                }
                Ok(DelayModel::Matrix(matrix))
            }
        }
    }

    /// Base delay for one batch on one link. `draw` identifies the batch so
    /// every message inside it shares the delay.
    pub fn base_delay(&self, from: usize, to: usize, draw: u64) -> TimeUs {
        match self {
            DelayModel::Uniform(d) => *d,
            DelayModel::Matrix(m) => m[from][to],
            DelayModel::Sampled { dist, seed } => {
                let key = mix(*seed, mix(draw, (from as u64) << 32 | to as u64));
                match dist {
                    SampledDist::UniformRange { lo, hi } => lo + key % (hi - lo + 1),
                    SampledDist::LogNormal { median, sigma_milli } => {
                        let z = gauss_from_key(key);
                        let sigma = *sigma_milli as f64 / 1000.0;
                        let v = (*median as f64) * (sigma * z).exp();
                        (v.max(1.0) as TimeUs).max(1)
                    }
                }
            }
        }
    }
}

fn mix(seed: u64, v: u64) -> u64 {
    let mut x = seed ^ v.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^= x >> 31;
    x
}

fn unit_from_key(key: u64) -> f64 {
    (key >> 11) as f64 / (1u64 << 53) as f64
}

/// Standard normal via Box-Muller on two derived uniforms.
fn gauss_from_key(key: u64) -> f64 {
    let u1 = unit_from_key(mix(key, 1)).max(1e-12);
    let u2 = unit_from_key(mix(key, 2));
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Piecewise-linear inverse CDF through the three percentile anchors, with
/// a floor at half the median and a cap at 1.4x the 90th percentile.
fn percentile_curve(u: f64, p50: TimeUs, p70: TimeUs, p90: TimeUs) -> TimeUs {
    let (p50, p70, p90) = (p50 as f64, p70 as f64, p90 as f64);
    let lo = p50 / 2.0;
    let hi = p90 * 1.4;
    let v = if u < 0.5 {
        lo + (p50 - lo) * (u / 0.5)
    } else if u < 0.7 {
        p50 + (p70 - p50) * ((u - 0.5) / 0.2)
    } else if u < 0.9 {
        p70 + (p90 - p70) * ((u - 0.7) / 0.2)
    } else {
        p90 + (hi - p90) * ((u - 0.9) / 0.1)
    };
    (v.max(1.0)) as TimeUs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geo_matrix_hits_percentiles_roughly() {
        let cfg = DelayModelCfg::GeoPercentile {
            p50: 75_000,
            p70: 115_000,
            p90: 200_000,
            seed: 9,
        };
        let model = DelayModel::build(&cfg, 60).unwrap();
        let DelayModel::Matrix(m) = &model else {
            panic!()
        };
        let mut all: Vec<TimeUs> = m.iter().flatten().copied().collect();
        all.sort_unstable();
        let pct = |p: f64| all[(all.len() as f64 * p) as usize];
        assert!((pct(0.5) as i64 - 75_000).abs() < 8_000, "{}", pct(0.5));
        assert!((pct(0.9) as i64 - 200_000).abs() < 20_000, "{}", pct(0.9));
    }

    #[test]
    fn sampled_draws_are_deterministic_and_batch_stable() {
        let model = DelayModel::Sampled {
            dist: SampledDist::UniformRange {
                lo: 10,
                hi: 1000,
            },
            seed: 4,
        };
        assert_eq!(model.base_delay(0, 1, 7), model.base_delay(0, 1, 7));
        assert_ne!(model.base_delay(0, 1, 7), model.base_delay(0, 1, 8));
    }
}
