//! Simulated sensor network: `n` sensors collectively measure `k`
//! conditions. Sensor `j` only needs the conditions in the support of column
//! `j` of the generator matrix, transmits `<x, column j>`, and the base
//! station decodes the measurement vector and names the faulty sensors.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::balancer::{construct_balanced_support, BalanceError};
use crate::codec::{instantiate, CodecError, DecodeResult, FieldChoice, GmFile};
use crate::finite_field::FieldElement;
use crate::rng::{derived_rng, DOMAIN_TRIAL};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimulationError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("corruption position {position} is out of range for length {n}")]
    PositionOutOfRange { position: usize, n: usize },
    #[error("corruption position {0} is listed twice")]
    DuplicatePosition(usize),
    #[error("building the balanced support failed: {0}")]
    Construction(#[from] BalanceError),
    #[error("instantiating the generator matrix failed: {0}")]
    Codec(#[from] CodecError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationConfig {
    pub n: usize,
    pub k: usize,
    pub q: FieldChoice,
    pub trials: usize,
    /// May exceed the correction radius to exercise failures.
    pub errors_per_trial: usize,
    pub seed: u64,
    pub max_attempts: usize,
}

impl SimulationConfig {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            q: FieldChoice::AUTO,
            trials: 100,
            errors_per_trial: 0,
            seed: 0,
            max_attempts: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub trials: usize,
    pub errors_per_trial: usize,
    pub correction_radius: usize,
    /// Number of conditions each sensor measures (column weights).
    pub per_sensor_conditions: Vec<usize>,
    pub workload_spread: usize,
    pub decode_success_rate: f64,
    pub culprit_identification_rate: f64,
    /// Trials where no codeword was within the correction radius.
    pub decode_failures: usize,
    /// Trials that decoded to a wrong message.
    pub miscorrections: usize,
    pub q_used: u64,
    pub attempts_used: usize,
    /// The generator matrix in `.gm` format.
    pub generator_matrix: String,
}

impl SimulationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for SimulationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let workload: Vec<String> = self.per_sensor_conditions.iter().map(usize::to_string).collect();
        writeln!(f, "{:<28} [{}, {}] over GF({})", "code", self.n, self.k, self.q_used)?;
        writeln!(f, "{:<28} {}", "seed", self.seed)?;
        writeln!(f, "{:<28} {}", "instantiation attempts", self.attempts_used)?;
        writeln!(f, "{:<28} {}", "conditions per sensor", workload.join(","))?;
        writeln!(f, "{:<28} {}", "workload spread", self.workload_spread)?;
        writeln!(f, "{:<28} {}", "trials", self.trials)?;
        writeln!(
            f,
            "{:<28} {} (radius {})",
            "errors per trial", self.errors_per_trial, self.correction_radius
        )?;
        writeln!(f, "{:<28} {:.4}", "decode success rate", self.decode_success_rate)?;
        writeln!(f, "{:<28} {:.4}", "culprit identification rate", self.culprit_identification_rate)?;
        writeln!(f, "{:<28} {}", "decode failures", self.decode_failures)?;
        write!(f, "{:<28} {}", "miscorrections", self.miscorrections)
    }
}

/// Replaces each listed position with a uniformly random different value.
pub fn corrupt<R: Rng + ?Sized>(
    codeword: &[FieldElement],
    positions: &[usize],
    rng: &mut R,
) -> Result<Vec<FieldElement>, SimulationError> {
    let n = codeword.len();
    let mut seen = BTreeSet::new();
    for &p in positions {
        if p >= n {
            return Err(SimulationError::PositionOutOfRange { position: p, n });
        }
        if !seen.insert(p) {
            return Err(SimulationError::DuplicatePosition(p));
        }
    }
    let mut out = codeword.to_vec();
    for &p in positions {
        let field = out[p].field();
        let q = field.modulus();
        let shift = rng.gen_range(1..q);
        out[p] = out[p] + field.elem(shift);
    }
    Ok(out)
}

/// Builds one balanced MDS generator and runs `trials` rounds of
/// encode, corrupt, and decode.
pub fn run_simulation(cfg: &SimulationConfig) -> Result<SimulationReport, SimulationError> {
    if cfg.k == 0 || cfg.k > cfg.n {
        return Err(SimulationError::InvalidConfig(format!(
            "need 1 <= k <= n, got n = {}, k = {}",
            cfg.n, cfg.k
        )));
    }
    if cfg.trials == 0 {
        return Err(SimulationError::InvalidConfig("trials must be at least 1".into()));
    }
    if cfg.errors_per_trial > cfg.n {
        return Err(SimulationError::InvalidConfig(format!(
            "cannot corrupt {} of {} sensors",
            cfg.errors_per_trial, cfg.n
        )));
    }

    let (support, _) = construct_balanced_support(cfg.n, cfg.k)?;
    let inst = instantiate(&support, cfg.q, cfg.seed, cfg.max_attempts)?;
    let g = &inst.generator;
    let field = g.field();

    let mut successes = 0;
    let mut culprits_found = 0;
    let mut failures = 0;
    let mut miscorrections = 0;
    for trial in 0..cfg.trials {
        let mut rng = derived_rng(cfg.seed, DOMAIN_TRIAL, trial as u64);
        let x: Vec<FieldElement> = (0..cfg.k)
            .map(|_| field.elem(rng.gen_range(0..field.modulus())))
            .collect();
        let codeword = g.encode(&x)?;
        let mut faulty = sample(&mut rng, cfg.n, cfg.errors_per_trial).into_vec();
        faulty.sort_unstable();
        let received = corrupt(&codeword, &faulty, &mut rng)?;
        match g.error_decode(&received)? {
            DecodeResult::Decoded {
                message,
                error_positions,
            } => {
                if message == x {
                    successes += 1;
                } else {
                    miscorrections += 1;
                }
                if error_positions == faulty {
                    culprits_found += 1;
                }
            }
            DecodeResult::Failure => failures += 1,
        }
    }

    let per_sensor_conditions = support.column_weights();
    let workload_spread =
        per_sensor_conditions.iter().max().unwrap() - per_sensor_conditions.iter().min().unwrap();
    Ok(SimulationReport {
        n: cfg.n,
        k: cfg.k,
        seed: cfg.seed,
        trials: cfg.trials,
        errors_per_trial: cfg.errors_per_trial,
        correction_radius: g.correction_radius(),
        per_sensor_conditions,
        workload_spread,
        decode_success_rate: successes as f64 / cfg.trials as f64,
        culprit_identification_rate: culprits_found as f64 / cfg.trials as f64,
        decode_failures: failures,
        miscorrections,
        q_used: field.modulus(),
        attempts_used: inst.attempts,
        generator_matrix: GmFile {
            generator: inst.generator.clone(),
            seed: cfg.seed,
        }
        .to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::PrimeField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn word(q: u64, v: &[u64]) -> Vec<FieldElement> {
        let f = PrimeField::new(q).unwrap();
        v.iter().map(|&x| f.elem(x)).collect()
    }

    fn distance(a: &[FieldElement], b: &[FieldElement]) -> usize {
        a.iter().zip(b).filter(|(x, y)| x != y).count()
    }

    #[test]
    fn corrupt_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = word(2, &[0, 1, 1, 0, 1]);
        assert_eq!(corrupt(&c, &[], &mut rng).unwrap(), c);
        for _ in 0..50 {
            let one = corrupt(&c, &[3], &mut rng).unwrap();
            assert_eq!(distance(&c, &one), 1);
            let all = corrupt(&c, &[0, 1, 2, 3, 4], &mut rng).unwrap();
            assert_eq!(distance(&c, &all), 5);
        }
        let c7 = word(7, &[3, 3, 3]);
        for _ in 0..50 {
            assert_eq!(distance(&c7, &corrupt(&c7, &[0, 1, 2], &mut rng).unwrap()), 3);
        }
    }

    #[test]
    fn corrupt_rejects_bad_positions() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let c = word(5, &[1, 2, 3]);
        assert_eq!(
            corrupt(&c, &[3], &mut rng),
            Err(SimulationError::PositionOutOfRange { position: 3, n: 3 })
        );
        assert_eq!(corrupt(&c, &[1, 1], &mut rng), Err(SimulationError::DuplicatePosition(1)));
    }

    #[test]
    fn within_radius_is_perfect() {
        let cfg = SimulationConfig {
            errors_per_trial: 1,
            seed: 7,
            ..SimulationConfig::new(8, 5)
        };
        let report = run_simulation(&cfg).unwrap();
        assert_eq!(report.decode_success_rate, 1.0);
        assert_eq!(report.culprit_identification_rate, 1.0);
        assert!(report.workload_spread <= 1);
        assert_eq!(report.per_sensor_conditions.iter().sum::<usize>(), 5 * 4);
        assert_eq!(report.q_used, 37);
    }

    #[test]
    fn no_errors() {
        let report = run_simulation(&SimulationConfig::new(6, 3)).unwrap();
        assert_eq!(report.decode_success_rate, 1.0);
        assert_eq!(report.culprit_identification_rate, 1.0);
    }

    #[test]
    fn beyond_radius_fails_sometimes() {
        let cfg = SimulationConfig {
            errors_per_trial: 2,
            trials: 200,
            ..SimulationConfig::new(8, 5)
        };
        let report = run_simulation(&cfg).unwrap();
        assert!(report.decode_success_rate < 1.0);
        assert_eq!(report.culprit_identification_rate, 0.0);
        let bad = (report.trials as f64 * (1.0 - report.decode_success_rate)).round() as usize;
        assert_eq!(report.decode_failures + report.miscorrections, bad);
    }

    #[test]
    fn deterministic_json() {
        let cfg = SimulationConfig {
            errors_per_trial: 1,
            seed: 99,
            ..SimulationConfig::new(7, 3)
        };
        let a = run_simulation(&cfg).unwrap().to_json();
        let b = run_simulation(&cfg).unwrap().to_json();
        assert_eq!(a, b);
        let value: serde_json::Value = serde_json::from_str(&a).unwrap();
        for key in [
            "per_sensor_conditions",
            "workload_spread",
            "decode_success_rate",
            "culprit_identification_rate",
            "q_used",
            "attempts_used",
            "generator_matrix",
        ] {
            assert!(value.get(key).is_some(), "missing {key}");
        }
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = SimulationConfig::new(4, 5);
        assert!(matches!(run_simulation(&cfg), Err(SimulationError::InvalidConfig(_))));
        cfg = SimulationConfig { trials: 0, ..SimulationConfig::new(5, 3) };
        assert!(matches!(run_simulation(&cfg), Err(SimulationError::InvalidConfig(_))));
        cfg = SimulationConfig { errors_per_trial: 6, ..SimulationConfig::new(5, 3) };
        assert!(matches!(run_simulation(&cfg), Err(SimulationError::InvalidConfig(_))));
    }
}
