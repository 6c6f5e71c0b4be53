//! Run configurations, the four run modes, and report emission.
//!
//! Reports are deterministic functions of their [`RunConfig`]; per-trial
//! randomness comes from [`trial_rng`] keyed by `(seed, trial index)`.

use std::fmt::Write as _;
use std::io;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::{trial_rng, BellBranches, BellOutcome};
use crate::protocol::{
    default_probes, derive_corrections, outcome_pairs, run_branch, table_lookup, target_state,
    verify_tables_with, CorrectionOp, InputState, Scheme, TableEntry, Verdict,
};
use crate::statevec::{Amplitude, QubitLabel};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_RANDOM_INPUTS: usize = 100;
pub const DEFAULT_TRIALS: usize = 16_000;
pub const DEFAULT_SEED: u64 = 2007;
pub const DEFAULT_FIDELITY_TOL: f64 = 1e-10;

/// Allowed deviation of a summed branch probability from 1.
pub const TOTAL_PROBABILITY_TOL: f64 = 1e-9;

/// Stream index reserved for the single random input of a sampling run.
const SAMPLE_INPUT_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Enumerate,
    Sample,
    Derive,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            _ => Err(Error::Config(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub scheme: Scheme,
    pub mode: Mode,
    pub input_coeffs: Option<Vec<Amplitude>>,
    pub renormalize: bool,
    pub random_inputs: usize,
    pub trials: usize,
    pub seed: u64,
    pub fidelity_tol: f64,
    pub output_format: OutputFormat,
}

impl RunConfig {
    pub fn new(scheme: Scheme, mode: Mode) -> Self {
        Self {
            scheme,
            mode,
            input_coeffs: None,
            renormalize: false,
            random_inputs: DEFAULT_RANDOM_INPUTS,
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            fidelity_tol: DEFAULT_FIDELITY_TOL,
            output_format: OutputFormat::Json,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fidelity_tol > 0.0 && self.fidelity_tol < 1.0) {
            return Err(Error::Config(format!(
                "tolerance must lie in (0, 1), got {}",
                self.fidelity_tol
            )));
        }
        match self.mode {
            Mode::Sample if self.trials == 0 => {
                return Err(Error::Config("trials must be at least 1".into()))
            }
            Mode::Enumerate if self.input_coeffs.is_none() && self.random_inputs == 0 => {
                return Err(Error::Config("random-inputs must be at least 1".into()))
            }
            _ => {}
        }
        if self.input_coeffs.is_some() {
            self.explicit_input()?;
        }
        Ok(())
    }

    /// The user-supplied input, validated (and rescaled if `renormalize`).
    fn explicit_input(&self) -> Result<Option<InputState>> {
        let Some(coeffs) = &self.input_coeffs else {
            return Ok(None);
        };
        let mut coeffs = coeffs.clone();
        if self.renormalize {
            let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(Error::Config(
                    "cannot renormalize a zero or non-finite input".into(),
                ));
            }
            coeffs.iter_mut().for_each(|c| *c /= norm);
        }
        InputState::new(self.scheme, coeffs)
            .map(Some)
            .map_err(|e| Error::Config(format!("input coefficients: {e}")))
    }
}

/// Parses a comma-separated coefficient list such as `0.6,0.8j` or
/// `0.5+0.5j,-0.5j,0.5,0`. Imaginary parts take a `j` (or `i`) suffix.
pub fn parse_coeffs(s: &str) -> Result<Vec<Amplitude>> {
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            let norm = match tok.strip_suffix('j') {
                Some(head) => format!("{head}i"),
                None => tok.to_string(),
            };
            Amplitude::from_str(&norm)
                .ok()
                .filter(|c| c.re.is_finite() && c.im.is_finite())
                .ok_or_else(|| Error::Config(format!("cannot parse coefficient {tok:?}")))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputRecord {
    pub index: usize,
    pub coeffs: Vec<Amplitude>,
    /// Sum of the 16 branch probabilities (enumeration only).
    pub total_probability: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchRecord {
    pub input: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trial: Option<u64>,
    pub outcome13: BellOutcome,
    pub outcome26: BellOutcome,
    pub probability: f64,
    pub fidelity: f64,
    pub correction: CorrectionOp,
    /// Bob's corrected state on (4, 5), phase-rotated for display.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub state: Option<Vec<Amplitude>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyRecord {
    pub outcome13: BellOutcome,
    pub outcome26: BellOutcome,
    pub count: u64,
    pub frequency: f64,
    pub expected: f64,
    /// `(frequency − expected) / σ` with `σ = √(p(1−p)/N)`.
    pub z_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedRecord {
    pub outcome13: BellOutcome,
    pub outcome26: BellOutcome,
    pub corrections: Vec<CorrectionOp>,
    pub listed: Vec<CorrectionOp>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Aggregates {
    pub branch_count: usize,
    /// Enumeration: the input total furthest from 1.
    pub total_probability: Option<f64>,
    pub min_fidelity: Option<f64>,
    pub frequencies: Vec<FrequencyRecord>,
    pub max_abs_z: Option<f64>,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub config: RunConfig,
    pub inputs: Vec<InputRecord>,
    pub branches: Vec<BranchRecord>,
    pub derived: Vec<DerivedRecord>,
    pub verdicts: Vec<TableEntry>,
    pub aggregates: Aggregates,
}

impl Report {
    fn empty(cfg: &RunConfig) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            config: cfg.clone(),
            inputs: Vec::new(),
            branches: Vec::new(),
            derived: Vec::new(),
            verdicts: Vec::new(),
            aggregates: Aggregates::default(),
        }
    }

    pub fn passed(&self) -> bool {
        self.aggregates.passed
    }

    /// Fills `branch_count`, `min_fidelity`, `passed` and `failures`.
    fn finish(mut self) -> Self {
        let tol = self.config.fidelity_tol;
        let agg = &mut self.aggregates;
        agg.branch_count = self.branches.len();
        if !self.branches.is_empty() {
            agg.min_fidelity = Some(
                self.branches
                    .iter()
                    .map(|b| b.fidelity)
                    .fold(f64::INFINITY, f64::min),
            );
        }
        let mut failures = Vec::new();
        if let Some(f) = agg.min_fidelity {
            if f < 1.0 - tol {
                failures.push(format!("min fidelity {f:.17e} below 1 - {tol:e}"));
            }
        }
        if let Some(p) = agg.total_probability {
            if (p - 1.0).abs() > TOTAL_PROBABILITY_TOL {
                failures.push(format!("total probability {p:.17e} differs from 1"));
            }
        }
        for e in self
            .verdicts
            .iter()
            .filter(|e| e.verdict == Verdict::Mismatch)
        {
            failures.push(format!("table mismatch at {}{}", e.outcome13, e.outcome26));
        }
        agg.passed = failures.is_empty();
        agg.failures = failures;
        self
    }
}

/// Dispatches on `cfg.mode`.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    match cfg.mode {
        Mode::Enumerate => run_enumeration(cfg),
        Mode::Sample => run_montecarlo(cfg),
        Mode::Derive => run_derivation(cfg),
        Mode::Verify => run_verification(cfg),
    }
}

fn enumeration_inputs(cfg: &RunConfig) -> Result<Vec<InputState>> {
    Ok(match cfg.explicit_input()? {
        Some(i) => vec![i],
        None => (0..cfg.random_inputs as u64)
            .map(|k| InputState::random(cfg.scheme, &mut trial_rng(cfg.seed, k)))
            .collect(),
    })
}

/// All 16 branches for the configured input, or for each random input.
pub fn run_enumeration(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let mut report = Report::empty(cfg);
    let mut worst_total: Option<f64> = None;
    for (index, input) in enumeration_inputs(cfg)?.into_iter().enumerate() {
        let mut total = 0.0;
        for (o13, o26) in outcome_pairs() {
            let r = run_branch(&input, o13, o26)?;
            total += r.probability;
            report.branches.push(BranchRecord {
                input: index,
                trial: None,
                outcome13: o13,
                outcome26: o26,
                probability: r.probability,
                fidelity: r.fidelity,
                correction: r.correction,
                state: Some(r.corrected_state.display_amplitudes()),
            });
        }
        if worst_total.is_none_or(|w| (total - 1.0).abs() > (w - 1.0).abs()) {
            worst_total = Some(total);
        }
        report.inputs.push(InputRecord {
            index,
            coeffs: input.coeffs().to_vec(),
            total_probability: Some(total),
        });
    }
    report.aggregates.total_probability = worst_total;
    Ok(report.finish())
}

/// `cfg.trials` independent protocol runs with Born-sampled outcomes.
pub fn run_montecarlo(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let input = match cfg.explicit_input()? {
        Some(i) => i,
        None => InputState::random(cfg.scheme, &mut trial_rng(cfg.seed, SAMPLE_INPUT_STREAM)),
    };
    let total = crate::protocol::assemble_total(&input)?;
    let target = target_state(&input)?;
    let (q1, q2, q3, q6) = (QubitLabel(1), QubitLabel(2), QubitLabel(3), QubitLabel(6));

    // The register is the same every trial, so each measurement stage is
    // resolved once and trials only draw outcomes.
    let first = BellBranches::new(&total, q1, q3)?;
    let mut second = Vec::with_capacity(4);
    for o13 in BellOutcome::ALL {
        let b = first.branch(o13);
        second.push(match &b.remainder {
            Some(rest) if b.is_possible() => Some(BellBranches::new(rest, q2, q6)?),
            _ => None,
        });
    }
    let mut outcomes: [[Option<(f64, CorrectionOp, f64)>; 4]; 4] = Default::default();
    for (o13, o26) in outcome_pairs() {
        let Some(stage) = &second[o13.index()] else {
            continue;
        };
        let b = stage.branch(o26);
        let Some(bob) = b.remainder.as_ref().filter(|_| b.is_possible()) else {
            continue;
        };
        let correction = table_lookup(cfg.scheme, o13, o26)[0];
        let fidelity = target.fidelity(&correction.apply(bob)?)?;
        outcomes[o13.index()][o26.index()] = Some((
            first.branch(o13).probability * b.probability,
            correction,
            fidelity,
        ));
    }

    let mut report = Report::empty(cfg);
    let mut counts = [[0u64; 4]; 4];
    for t in 0..cfg.trials as u64 {
        let mut rng = trial_rng(cfg.seed, t);
        let o13 = first.draw(&mut rng);
        let stage = second[o13.index()]
            .as_ref()
            .expect("drawn outcomes are possible");
        let o26 = stage.draw(&mut rng);
        let (probability, correction, fidelity) =
            outcomes[o13.index()][o26.index()].expect("drawn outcomes are possible");
        counts[o13.index()][o26.index()] += 1;
        report.branches.push(BranchRecord {
            input: 0,
            trial: Some(t),
            outcome13: o13,
            outcome26: o26,
            probability,
            fidelity,
            correction,
            state: None,
        });
    }

    let n = cfg.trials as f64;
    let mut max_z: f64 = 0.0;
    for (o13, o26) in outcome_pairs() {
        let expected = crate::protocol::collapse(&input, o13, o26)?.0;
        let count = counts[o13.index()][o26.index()];
        let frequency = count as f64 / n;
        let sigma = (expected * (1.0 - expected) / n).sqrt();
        let z_score = if sigma > 0.0 {
            (frequency - expected) / sigma
        } else {
            0.0
        };
        max_z = max_z.max(z_score.abs());
        report.aggregates.frequencies.push(FrequencyRecord {
            outcome13: o13,
            outcome26: o26,
            count,
            frequency,
            expected,
            z_score,
        });
    }
    report.aggregates.max_abs_z = Some(max_z);
    report.inputs.push(InputRecord {
        index: 0,
        coeffs: input.coeffs().to_vec(),
        total_probability: None,
    });
    Ok(report.finish())
}

/// Brute-force correction sets for every outcome pair.
pub fn run_derivation(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let probes = default_probes(cfg.scheme, cfg.seed);
    let mut report = Report::empty(cfg);
    for (o13, o26) in outcome_pairs() {
        report.derived.push(DerivedRecord {
            outcome13: o13,
            outcome26: o26,
            corrections: derive_corrections(cfg.scheme, o13, o26, &probes)?,
            listed: table_lookup(cfg.scheme, o13, o26),
        });
    }
    Ok(report.finish())
}

/// Published table against derivation, one verdict per outcome pair.
pub fn run_verification(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let table = verify_tables_with(
        cfg.scheme,
        &default_probes(cfg.scheme, cfg.seed),
        &default_probes(Scheme::Scheme2, cfg.seed),
    )?;
    let mut report = Report::empty(cfg);
    report.verdicts = table.entries;
    Ok(report.finish())
}

/// JSON formatter that prints every float with 17 significant digits.
struct Sig17;

impl serde_json::ser::Formatter for Sig17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_json(r: &Report) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17);
    r.serialize(&mut ser).expect("report serializes");
    out.push(b'\n');
    out
}

fn list(ops: &[CorrectionOp]) -> String {
    ops.iter()
        .map(|o| o.to_string())
        .collect::<Vec<_>>()
        .join("|")
}

/// Branch rows for enumerate/sample runs, table rows for derive/verify.
pub fn to_csv(r: &Report) -> Vec<u8> {
    let mut s = String::new();
    match r.config.mode {
        Mode::Enumerate | Mode::Sample => {
            s.push_str("outcome13,outcome26,probability,fidelity,correction\n");
            for b in &r.branches {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    b.outcome13.name(),
                    b.outcome26.name(),
                    sig17(b.probability),
                    sig17(b.fidelity),
                    b.correction
                );
            }
        }
        Mode::Derive => {
            s.push_str("outcome13,outcome26,derived,listed\n");
            for d in &r.derived {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    d.outcome13.name(),
                    d.outcome26.name(),
                    list(&d.corrections),
                    list(&d.listed)
                );
            }
        }
        Mode::Verify => {
            s.push_str("outcome13,outcome26,derived,listed,verdict\n");
            for e in &r.verdicts {
                let listed: Vec<_> = e.listed.iter().map(|l| l.correction).collect();
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    e.outcome13.name(),
                    e.outcome26.name(),
                    list(&e.derived),
                    list(&listed),
                    e.verdict
                );
            }
        }
    }
    s.into_bytes()
}

fn fmt_amp(a: &Amplitude) -> String {
    format!("{:+.6}{:+.6}i", a.re, a.im)
}

fn fmt_ket(amps: &[Amplitude]) -> String {
    let terms: Vec<String> = amps
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 1e-12)
        .map(|(i, a)| format!("({})|{:02b}⟩", fmt_amp(a), i))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" ")
    }
}

pub fn to_text(r: &Report) -> Vec<u8> {
    let mut s = String::new();
    let cfg = &r.config;
    let _ = writeln!(s, "{} {:?}, seed {}", cfg.scheme, cfg.mode, cfg.seed);
    match cfg.mode {
        Mode::Enumerate => {
            for input in &r.inputs {
                let coeffs: Vec<String> = input.coeffs.iter().map(fmt_amp).collect();
                let _ = writeln!(s, "\ninput #{}: [{}]", input.index, coeffs.join(", "));
                let _ = writeln!(
                    s,
                    "  {:<4} {:<4} {:>12} {:>20} {:<12} state(4,5)",
                    "13", "26", "probability", "fidelity", "correction"
                );
                for b in r.branches.iter().filter(|b| b.input == input.index) {
                    let _ = writeln!(
                        s,
                        "  {:<4} {:<4} {:>12.10} {:>20.17} {:<12} {}",
                        b.outcome13.to_string(),
                        b.outcome26.to_string(),
                        b.probability,
                        b.fidelity,
                        b.correction.to_string(),
                        b.state.as_deref().map(fmt_ket).unwrap_or_default()
                    );
                }
                if let Some(t) = input.total_probability {
                    let _ = writeln!(s, "  total probability {t:.17}");
                }
            }
        }
        Mode::Sample => {
            let _ = writeln!(s, "\n{} trials", r.branches.len());
            let _ = writeln!(
                s,
                "  {:<4} {:<4} {:>8} {:>12} {:>12} {:>8}",
                "13", "26", "count", "frequency", "expected", "z"
            );
            for f in &r.aggregates.frequencies {
                let _ = writeln!(
                    s,
                    "  {:<4} {:<4} {:>8} {:>12.6} {:>12.6} {:>8.3}",
                    f.outcome13.to_string(),
                    f.outcome26.to_string(),
                    f.count,
                    f.frequency,
                    f.expected,
                    f.z_score
                );
            }
            if let Some(z) = r.aggregates.max_abs_z {
                let _ = writeln!(s, "  max |z| {z:.3}");
            }
        }
        Mode::Derive => {
            for d in &r.derived {
                let _ = writeln!(
                    s,
                    "  {}{}  derived {:<28} table {}",
                    d.outcome13,
                    d.outcome26,
                    list(&d.corrections),
                    list(&d.listed)
                );
            }
        }
        Mode::Verify => {
            for e in &r.verdicts {
                let listed: Vec<String> = e
                    .listed
                    .iter()
                    .map(|l| match l.general {
                        Some(g) => format!("{} [general: {g}]", l.correction),
                        None => l.correction.to_string(),
                    })
                    .collect();
                let _ = writeln!(
                    s,
                    "  {}{}  {:<26} table {}",
                    e.outcome13,
                    e.outcome26,
                    e.verdict.to_string(),
                    listed.join(", ")
                );
            }
        }
    }
    let agg = &r.aggregates;
    if let Some(f) = agg.min_fidelity {
        let _ = writeln!(s, "min fidelity {f:.17}");
    }
    if let Some(p) = agg.total_probability {
        let _ = writeln!(s, "total probability {p:.17}");
    }
    let _ = writeln!(s, "{}", if agg.passed { "PASS" } else { "FAIL" });
    for f in &agg.failures {
        let _ = writeln!(s, "  {f}");
    }
    s.into_bytes()
}

/// Serializes `r` in the requested format.
pub fn emit_report(r: &Report, format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::Json => to_json(r),
        OutputFormat::Csv => to_csv(r),
        OutputFormat::Text => to_text(r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Amplitude {
        Amplitude::new(re, im)
    }

    #[test]
    fn coefficient_syntax() {
        assert_eq!(
            parse_coeffs("0.6,0.8j").unwrap(),
            vec![c(0.6, 0.0), c(0.0, 0.8)]
        );
        assert_eq!(
            parse_coeffs("0.5+0.5j, -0.5-0.5j").unwrap(),
            vec![c(0.5, 0.5), c(-0.5, -0.5)]
        );
        assert_eq!(parse_coeffs("1e-1-2e-1j").unwrap(), vec![c(0.1, -0.2)]);
        assert_eq!(parse_coeffs("0.3i").unwrap(), vec![c(0.0, 0.3)]);
        assert!(parse_coeffs("abc").is_err());
        assert!(parse_coeffs("0.5,,0.5").is_err());
        assert!(parse_coeffs("inf").is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = RunConfig::new(Scheme::Scheme1, Mode::Sample);
        cfg.trials = 0;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));

        let mut cfg = RunConfig::new(Scheme::Scheme1, Mode::Enumerate);
        cfg.input_coeffs = Some(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(run(&cfg), Err(Error::Config(_))));
        cfg.renormalize = true;
        assert!(run(&cfg).is_ok());

        cfg.input_coeffs = Some(vec![c(1.0, 0.0)]);
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));

        let mut cfg = RunConfig::new(Scheme::Scheme2, Mode::Enumerate);
        cfg.fidelity_tol = 0.0;
        assert!(cfg.validate().is_err());
        cfg.fidelity_tol = 1e-10;
        cfg.random_inputs = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn enumerate_uniform_scheme2() {
        let mut cfg = RunConfig::new(Scheme::Scheme2, Mode::Enumerate);
        cfg.input_coeffs = Some(vec![c(0.5, 0.0); 4]);
        let r = run(&cfg).unwrap();
        assert_eq!(r.branches.len(), 16);
        assert!(r
            .branches
            .iter()
            .all(|b| (b.probability - 1.0 / 16.0).abs() < 1e-12));
        assert!(r.aggregates.min_fidelity.unwrap() >= 1.0 - 1e-10);
        assert!((r.aggregates.total_probability.unwrap() - 1.0).abs() < 1e-12);
        assert!(r.passed());
    }

    #[test]
    fn enumerate_alpha_only_lands_on_00() {
        let mut cfg = RunConfig::new(Scheme::Scheme1, Mode::Enumerate);
        cfg.input_coeffs = Some(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let r = run(&cfg).unwrap();
        for b in &r.branches {
            let st = b.state.as_ref().unwrap();
            assert!((st[0] - c(1.0, 0.0)).norm() < 1e-12, "{st:?}");
            assert!(b.fidelity >= 1.0 - 1e-10);
        }
    }

    #[test]
    fn enumerate_random_inputs_blocks() {
        let mut cfg = RunConfig::new(Scheme::Scheme1, Mode::Enumerate);
        cfg.random_inputs = 3;
        let r = run(&cfg).unwrap();
        assert_eq!(r.inputs.len(), 3);
        assert_eq!(r.branches.len(), 48);
        assert!(r.passed());
    }

    #[test]
    fn single_trial() {
        let mut cfg = RunConfig::new(Scheme::Scheme2, Mode::Sample);
        cfg.trials = 1;
        let r = run(&cfg).unwrap();
        assert_eq!(r.branches.len(), 1);
        assert!(r.branches[0].fidelity >= 1.0 - 1e-10);
    }

    #[test]
    fn trials_match_sequential_sampling() {
        use crate::measurement::sample_bell;
        let mut cfg = RunConfig::new(Scheme::Scheme1, Mode::Sample);
        cfg.trials = 200;
        cfg.seed = 99;
        let r = run(&cfg).unwrap();
        let input = InputState::random(cfg.scheme, &mut trial_rng(cfg.seed, SAMPLE_INPUT_STREAM));
        let total = crate::protocol::assemble_total(&input).unwrap();
        for b in &r.branches {
            let mut rng = trial_rng(cfg.seed, b.trial.unwrap());
            let (o13, first) = sample_bell(&total, QubitLabel(1), QubitLabel(3), &mut rng).unwrap();
            let rest = first.remainder.unwrap();
            let (o26, second) = sample_bell(&rest, QubitLabel(2), QubitLabel(6), &mut rng).unwrap();
            assert_eq!((b.outcome13, b.outcome26), (o13, o26));
            assert!((b.probability - first.probability * second.probability).abs() < 1e-15);
        }
    }

    #[test]
    fn failing_tolerance_fails_report() {
        // a deliberately wrong correction is caught by the aggregate check
        let mut cfg = RunConfig::new(Scheme::Scheme2, Mode::Enumerate);
        cfg.random_inputs = 1;
        let mut r = run(&cfg).unwrap();
        r.branches[0].fidelity = 0.5;
        let r = r.finish();
        assert!(!r.passed());
        assert_eq!(r.aggregates.failures.len(), 1);
    }

    #[test]
    fn json_round_trip_exact() {
        let mut cfg = RunConfig::new(Scheme::Scheme2, Mode::Enumerate);
        cfg.random_inputs = 2;
        let r = run(&cfg).unwrap();
        let bytes = to_json(&r);
        let back: Report = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(back, r);
        let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        for key in ["schema", "config", "branches", "aggregates", "verdicts"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["schema"], 1);
        // 17 significant digits
        let text = String::from_utf8(bytes).unwrap();
        assert!(
            text.contains("\"probability\":6.2500000000000000e-2")
                || text.contains("\"probability\":6.25000000000000"),
            "{}",
            &text[..400]
        );
    }

    #[test]
    fn csv_line_count() {
        let mut cfg = RunConfig::new(Scheme::Scheme1, Mode::Enumerate);
        cfg.random_inputs = 1;
        let csv = String::from_utf8(to_csv(&run(&cfg).unwrap())).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 17);
        assert_eq!(
            lines[0],
            "outcome13,outcome26,probability,fidelity,correction"
        );
        assert!(lines[1].starts_with("PhiPlus,PhiPlus,"));
        assert!(lines[1].ends_with(",I4*Z5"));
    }

    #[test]
    fn text_mentions_pass() {
        let mut cfg = RunConfig::new(Scheme::Scheme1, Mode::Verify);
        cfg.output_format = OutputFormat::Text;
        let text = String::from_utf8(emit_report(&run(&cfg).unwrap(), OutputFormat::Text)).unwrap();
        assert!(text.contains("subspace-only"));
        assert!(text.trim_end().ends_with("PASS"));
    }
}
