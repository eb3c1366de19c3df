//! The auditor registry: every CLI subcommand is an auditor behind a
//! common trait, registered by name and selected at runtime. Each auditor
//! turns a config plus seed into one certificate.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::audit::{af_audit, en_product_fiber, random_fibers, shift_orbit_fiber, Fiber, TestSet};
use crate::cantor::{ClopenSet, ProductCylinder, Word};
use crate::cert::{Certificate, Verdict};
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::measure::{
    en_constraint_system, en_constraint_system_all_pairs, pi_obstruction, twisted_unique_measure_solve,
    CellMeasure, CellSolution, MeasureSolution, MeasureVector, MeasuredSet,
};
use crate::odometer::{
    dyadic_style_chain, f2_s3_chain, stabilizer_level, uniform_invariance_check,
    uniform_invariance_check_tables, QuotientChain,
};
use crate::rational::{self, inv_pow};
use crate::sft::PrefixBisection;
use crate::twisted::{
    diagonal_measure, effectiveness_witness, evaluate_at, is_isotropy_at, measure_invariance_check,
    minimality_witness, minimality_witness_verifies, BasisConstraint, BasisSet, SupportedArrow,
    UnitPoint,
};
use crate::words::{ball, ball_subsets, folner_audit, integer_intervals, GroupElement, GroupSpec};

pub trait Auditor {
    fn name(&self) -> &'static str;
    fn run(&self, cfg: &ExperimentConfig, seed: u64) -> Result<Certificate>;
}

/// All auditors, keyed by subcommand name.
pub fn registry() -> BTreeMap<&'static str, Box<dyn Auditor>> {
    let auditors: Vec<Box<dyn Auditor>> = vec![
        Box::new(MeasureSolve),
        Box::new(TwistedMeasureSolve),
        Box::new(InvarianceCheck),
        Box::new(FolnerAudit),
        Box::new(AfAudit),
        Box::new(PiObstruct),
        Box::new(WitnessMinimal),
        Box::new(WitnessEffective),
        Box::new(Diagonal),
        Box::new(OdometerCheck),
    ];
    auditors.into_iter().map(|a| (a.name(), a)).collect()
}

fn verdict_of(violations: &[String]) -> Verdict {
    if violations.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

struct MeasureSolve;

impl Auditor for MeasureSolve {
    fn name(&self) -> &'static str {
        "measure-solve"
    }

    fn run(&self, cfg: &ExperimentConfig, seed: u64) -> Result<Certificate> {
        let n = cfg.scale.alphabet;
        let depth = cfg.scale.depth;
        let sys = if cfg.measure.all_pairs {
            en_constraint_system_all_pairs(n, depth)?
        } else {
            en_constraint_system(n, depth)?
        };
        let cert = Certificate::new("unique-invariant-measure", Verdict::Pass, seed)
            .with_param("alphabet", n)
            .with_param("depth", depth as u64)
            .with_param("constraints", sys.rows().len() as u64);
        Ok(match sys.solve_measure()? {
            MeasureSolution::Unique(m) => {
                let uniform = MeasureVector::uniform(depth, n);
                let values: BTreeMap<String, String> = m
                    .values
                    .iter()
                    .map(|(w, v)| (w.to_string(), rational::to_string(v)))
                    .collect();
                let mut cert = cert.with_witness(json!({ "measure": values }));
                if m != uniform {
                    cert.verdict = Verdict::Fail;
                    cert = cert.with_witness("unique solution differs from the uniform vector");
                }
                cert
            }
            MeasureSolution::Space { dim, .. } => {
                let mut cert = cert.with_param("solution_dim", dim as u64);
                cert.verdict = Verdict::Fail;
                cert.with_witness("solution space is not a point")
            }
            MeasureSolution::Infeasible { combination } => {
                let combo: Vec<String> = combination.iter().map(rational::to_string).collect();
                let mut cert = cert.with_witness(json!({ "infeasible_combination": combo }));
                cert.verdict = Verdict::Fail;
                cert
            }
        })
    }
}

struct TwistedMeasureSolve;

impl Auditor for TwistedMeasureSolve {
    fn name(&self) -> &'static str {
        "twisted-measure-solve"
    }

    fn run(&self, cfg: &ExperimentConfig, seed: u64) -> Result<Certificate> {
        let n = cfg.scale.alphabet;
        let depth = cfg.scale.depth;
        let window = cfg.measure_window()?;
        let cert = Certificate::new("twisted-unique-invariant-measure", Verdict::Pass, seed)
            .with_param("alphabet", n)
            .with_param("depth", depth as u64)
            .with_param("window", cfg.measure.window.clone())
            .with_param("twist_radius", cfg.scale.twist_radius);
        Ok(
            match twisted_unique_measure_solve(n, depth, &window, cfg.scale.twist_radius)? {
                CellSolution::Unique(m) => {
                    let product = CellMeasure::product(window, depth, n);
                    let mut cert = cert
                        .with_param("cells", m.values.len() as u64)
                        .with_rational_param(
                            "cell_mass",
                            m.values.values().next().expect("nonempty"),
                        );
                    if m != product {
                        cert.verdict = Verdict::Fail;
                        cert = cert.with_witness("unique solution differs from the product measure");
                    }
                    cert
                }
                CellSolution::Space { dim } => {
                    let mut cert = cert.with_param("solution_dim", dim as u64);
                    cert.verdict = Verdict::Fail;
                    cert.with_witness("solution space is not a point")
                }
                CellSolution::Infeasible { combination } => {
                    let combo: Vec<String> = combination.iter().map(rational::to_string).collect();
                    let mut cert = cert.with_witness(json!({ "infeasible_combination": combo }));
                    cert.verdict = Verdict::Fail;
                    cert
                }
            },
        )
    }
}

struct InvarianceCheck;

impl Auditor for InvarianceCheck {
    fn name(&self) -> &'static str {
        "invariance-check"
    }

    fn run(&self, cfg: &ExperimentConfig, seed: u64) -> Result<Certificate> {
        let trunc = cfg.truncation()?;
        let report = measure_invariance_check(&trunc, cfg.measure.max_constraints)?;
        Ok(
            Certificate::new("product-measure-invariance", verdict_of(&report.violations), seed)
                .with_param("alphabet", trunc.alphabet)
                .with_param("depth", trunc.depth as u64)
                .with_param("window_radius", trunc.window_radius)
                .with_param("twist_radius", trunc.twist_radius)
                .with_param("max_constraints", cfg.measure.max_constraints as u64)
                .with_param("representatives_checked", report.representatives_checked)
                .with_param("total_covered", report.total_covered.to_string())
                .with_witnesses(report.violations.iter().map(|v| Value::String(v.clone()))),
        )
    }
}

struct FolnerAudit;

impl Auditor for FolnerAudit {
    fn name(&self) -> &'static str {
        "folner-audit"
    }

    fn run(&self, cfg: &ExperimentConfig, seed: u64) -> Result<Certificate> {
        let spec = cfg.group_spec();
        let b = cfg.test_set()?;
        let family = match spec {
            GroupSpec::Free(_) => ball_subsets(spec, cfg.folner.radius, cfg.folner.max_size),
            GroupSpec::Integers => integer_intervals(cfg.folner.interval_max),
        };
        let report = folner_audit(&b, family)?;
        let mut violations = Vec::new();
        if let Some(delta) = cfg.delta()? {
            if report.min_deficiency < delta {
                violations.push(format!(
                    "min deficiency {} below required {}",
                    report.min_deficiency,
                    delta
                ));
            }
        }
        Ok(
            Certificate::new("folner-lower-bound", verdict_of(&violations), seed)
                .with_param("group", cfg.group.kind.clone())
                .with_param("radius", cfg.folner.radius)
                .with_param("max_size", cfg.folner.max_size as u64)
                .with_param("sets_checked", report.sets_checked)
                .with_rational_param("min_deficiency", &report.min_deficiency)
                .with_witness(json!({
                    "minimizing_set": report
                        .witness
                        .iter()
                        .map(|g| g.to_token())
                        .collect::<Vec<_>>()
                }))
                .with_witnesses(violations.iter().map(|v| Value::String(v.clone()))),
        )
    }
}

struct AfAudit;

impl Auditor for AfAudit {
    fn name(&self) -> &'static str {
        "af-audit"
    }

    fn run(&self, cfg: &ExperimentConfig, seed: u64) -> Result<Certificate> {
        let trunc = cfg.truncation()?;
        let spec = cfg.group_spec();
        let b = TestSet(cfg.test_set()?);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fibers: Vec<Fiber> = match cfg.audit.fiber_family.as_str() {
            "random" => random_fibers(&trunc, &mut rng, cfg.audit.fiber_count, cfg.audit.max_label)?,
            "en-product" => {
                let words = Word::enumerate(trunc.alphabet, trunc.depth);
                let base = UnitPoint::new(ball(spec, 3).into_iter().map(|t| {
                    (t, words[rng.gen_range(0..words.len())].clone())
                }));
                let indices = cfg
                    .audit
                    .en_indices
                    .iter()
                    .map(|t| GroupElement::parse(spec, t))
                    .collect::<Result<Vec<_>>>()?;
                vec![en_product_fiber(&trunc, cfg.audit.en_k, &indices, &base)?]
            }
            "shift-orbit" => {
                if spec != GroupSpec::Integers {
                    return Err(Error::Config(
                        "shift-orbit fibers need group.kind = \"integers\"".to_string(),
                    ));
                }
                (2..=cfg.audit.interval_max)
                    .map(|m| shift_orbit_fiber(m, trunc.depth))
                    .collect::<Result<Vec<_>>>()?
            }
            other => return Err(Error::Config(format!("fiber family {other:?} unknown"))),
        };
        let delta = cfg.delta()?;
        let report = af_audit(fibers, &b, delta.as_ref(), &trunc)?;
        let verdict = if report.vacuous() {
            Verdict::Vacuous
        } else {
            verdict_of(&report.violations)
        };
        let mut cert = Certificate::new("almost-finiteness-deficiency", verdict, seed)
            .with_param("group", cfg.group.kind.clone())
            .with_param("fiber_family", cfg.audit.fiber_family.clone())
            .with_param("fibers", report.records.len() as u64);
        if let Some(min) = &report.min_deficiency {
            cert = cert.with_rational_param("min_deficiency", min);
        }
        if let Some(delta) = &delta {
            cert = cert.with_rational_param("delta", delta);
        }
        cert = cert.with_witnesses(report.violations.iter().map(|v| Value::String(v.clone())));
        // extremal fiber as the leading witness when everything passed
        if report.violations.is_empty() {
            if let Some(extremal) = report
                .records
                .iter()
                .min_by(|a, b| a.direct.cmp(&b.direct))
            {
                cert = cert.with_witness(json!({
                    "fiber": extremal.id,
                    "size": extremal.size,
                    "classes": extremal.classes,
                    "deficiency": rational::to_string(&extremal.direct),
                }));
            }
        }
        Ok(cert)
    }
}

struct PiObstruct;

fn clopen_from_prefixes(prefixes: &[String], alphabet: u8) -> Result<ClopenSet> {
    if prefixes.is_empty() {
        return Ok(ClopenSet::full(alphabet));
    }
    ClopenSet::new(
        prefixes
            .iter()
            .map(|p| Word::parse(p, alphabet))
            .collect::<Result<Vec<_>>>()?,
        alphabet,
    )
}

impl Auditor for PiObstruct {
    fn name(&self) -> &'static str {
        "pi-obstruct"
    }

    fn run(&self, cfg: &ExperimentConfig, seed: u64) -> Result<Certificate> {
        let n = cfg.scale.alphabet;
        let u = MeasuredSet::Clopen(clopen_from_prefixes(&cfg.pi.u, n)?);
        let v = MeasuredSet::Clopen(clopen_from_prefixes(&cfg.pi.v, n)?);
        let r = pi_obstruction(&u, &v)?;
        let verdict = if r.obstructed {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Ok(Certificate::new("pure-infiniteness-obstruction", verdict, seed)
            .with_param("U", u.describe())
            .with_param("V", v.describe())
            .with_rational_param("mass_u", &r.mass_u)
            .with_rational_param("mass_v", &r.mass_v)
            .with_witness(if r.obstructed {
                format!(
                    "no bisection with source U fits inside V: {} > {}",
                    rational::to_string(&r.mass_u),
                    rational::to_string(&r.mass_v)
                )
            } else {
                "no obstruction at this pair".to_string()
            }))
    }
}

struct WitnessMinimal;

impl Auditor for WitnessMinimal {
    fn name(&self) -> &'static str {
        "witness-minimal"
    }

    fn run(&self, cfg: &ExperimentConfig, seed: u64) -> Result<Certificate> {
        let trunc = cfg.truncation()?;
        let spec = trunc.group;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let words = Word::enumerate(trunc.alphabet, trunc.depth);
        let window = ball(spec, trunc.window_radius);
        let base_window = ball(spec, trunc.window_radius + trunc.twist_radius);
        let twists = trunc.twists();
        let mut violations = Vec::new();
        for i in 0..cfg.witness.count {
            let x = UnitPoint::new(base_window.iter().map(|t| {
                (t.clone(), words[rng.gen_range(0..words.len())].clone())
            }));
            let gamma = twists[rng.gen_range(0..twists.len())].clone();
            let coords = 1 + rng.gen_range(0..2usize.min(window.len()));
            let mut target = Vec::new();
            for _ in 0..coords {
                let t = window[rng.gen_range(0..window.len())].clone();
                let len = rng.gen_range(1..=trunc.depth);
                let prefix = Word::enumerate(trunc.alphabet, len);
                target.push((t, prefix[rng.gen_range(0..prefix.len())].clone()));
            }
            let target = ProductCylinder::new(target);
            let witness = minimality_witness(&x, &target, &gamma, &trunc)?;
            if !minimality_witness_verifies(&witness, &x, &target) {
                violations.push(format!("instance {i}: witness failed re-evaluation"));
            }
        }
        Ok(
            Certificate::new("minimality-witness", verdict_of(&violations), seed)
                .with_param("instances", cfg.witness.count as u64)
                .with_param("depth", trunc.depth as u64)
                .with_witnesses(violations.iter().map(|v| Value::String(v.clone()))),
        )
    }
}

struct WitnessEffective;

impl Auditor for WitnessEffective {
    fn name(&self) -> &'static str {
        "witness-effective"
    }

    fn run(&self, cfg: &ExperimentConfig, seed: u64) -> Result<Certificate> {
        let trunc = cfg.truncation()?;
        if trunc.depth < 2 {
            return Err(Error::Config(
                "witness-effective needs scale.depth >= 2 so alternatives exist at every prefix"
                    .to_string(),
            ));
        }
        let spec = trunc.group;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let words = Word::enumerate(trunc.alphabet, trunc.depth);
        let eval_window = ball(spec, 1);
        let ambient = ball(spec, trunc.window_radius.max(1) + trunc.twist_radius);
        let twists: Vec<GroupElement> = trunc
            .twists()
            .into_iter()
            .filter(|g| !g.is_identity())
            .collect();
        if twists.is_empty() {
            return Err(Error::Config(
                "witness-effective needs scale.twist_radius >= 1".to_string(),
            ));
        }
        let identity = spec.identity();
        let mut violations = Vec::new();
        for i in 0..cfg.witness.count {
            let gamma = twists[rng.gen_range(0..twists.len())].clone();
            let len = rng.gen_range(1..trunc.depth);
            let prefixes = Word::enumerate(trunc.alphabet, len);
            let sigma = PrefixBisection::new(
                prefixes[rng.gen_range(0..prefixes.len())].clone(),
                prefixes[rng.gen_range(0..prefixes.len())].clone(),
            )?;
            let x = loop {
                let candidate = &words[rng.gen_range(0..words.len())];
                if candidate.has_prefix(sigma.from_prefix()) {
                    break candidate.clone();
                }
            };
            let arrow = sigma.apply(&x)?;
            let mut units = UnitPoint::new(ambient.iter().map(|t| {
                (t.clone(), words[rng.gen_range(0..words.len())].clone())
            }));
            units.insert(identity.clone(), x.clone());
            let p = SupportedArrow::new([(identity.clone(), arrow)], gamma.clone(), trunc.depth)?;
            let neighborhood = BasisSet::new(
                [(identity.clone(), BasisConstraint::Bisection(sigma))],
                gamma,
            );
            let (perturbed, new_units, _) =
                effectiveness_witness(&p, &units, &neighborhood, &trunc)?;
            if !neighborhood.contains(&perturbed, &new_units)? {
                violations.push(format!("instance {i}: perturbation left the neighborhood"));
                continue;
            }
            let (s, r) = evaluate_at(&perturbed, &new_units, &eval_window)?;
            if s == r {
                violations.push(format!("instance {i}: source and range still agree"));
            }
        }
        Ok(
            Certificate::new("effectiveness-witness", verdict_of(&violations), seed)
                .with_param("instances", cfg.witness.count as u64)
                .with_param("depth", trunc.depth as u64)
                .with_witnesses(violations.iter().map(|v| Value::String(v.clone()))),
        )
    }
}

struct Diagonal;

impl Auditor for Diagonal {
    fn name(&self) -> &'static str {
        "diagonal"
    }

    fn run(&self, cfg: &ExperimentConfig, seed: u64) -> Result<Certificate> {
        let trunc = cfg.truncation()?;
        let spec = trunc.group;
        let t1 = spec.identity();
        let t2 = spec.symmetric_generators()[0].clone();
        let mut violations = Vec::new();
        let mut masses = BTreeMap::new();
        for d in 1..=trunc.depth {
            let mass = diagonal_measure(&t1, &t2, d, trunc.alphabet)?;
            if mass != inv_pow(trunc.alphabet as u64, d) {
                violations.push(format!("depth {d}: diagonal mass off"));
            }
            masses.insert(format!("depth_{d}"), rational::to_string(&mass));
        }
        // constant points carry isotropy at every twist; a perturbation
        // through the effectiveness witness destroys it
        let words = Word::enumerate(trunc.alphabet, trunc.depth);
        let eval_window = ball(spec, 1);
        let units = UnitPoint::new(
            ball(spec, trunc.twist_radius + 1)
                .into_iter()
                .map(|t| (t, words[0].clone())),
        );
        for gamma in trunc.twists() {
            let p = SupportedArrow::purely_twisted(gamma.clone(), trunc.depth);
            if !is_isotropy_at(&p, &units, &eval_window)? {
                violations.push(format!("twist {gamma}: constant point not isotropy"));
                continue;
            }
            if gamma.is_identity() {
                continue;
            }
            let neighborhood = BasisSet::new([], gamma.clone());
            let (perturbed, new_units, _) =
                effectiveness_witness(&p, &units, &neighborhood, &trunc)?;
            if is_isotropy_at(&perturbed, &new_units, &eval_window)? {
                violations.push(format!("twist {gamma}: perturbation kept isotropy"));
            }
        }
        Ok(
            Certificate::new("diagonal-and-isotropy", verdict_of(&violations), seed)
                .with_param("alphabet", trunc.alphabet)
                .with_param("depth", trunc.depth as u64)
                .with_witness(json!({ "diagonal_masses": masses }))
                .with_witnesses(violations.iter().map(|v| Value::String(v.clone()))),
        )
    }
}

struct OdometerCheck;

impl Auditor for OdometerCheck {
    fn name(&self) -> &'static str {
        "odometer-check"
    }

    fn run(&self, cfg: &ExperimentConfig, seed: u64) -> Result<Certificate> {
        let chain: QuotientChain = match cfg.odometer.chain.as_str() {
            "dyadic" => dyadic_style_chain(&cfg.odometer.moduli)?,
            "f2-s3" => f2_s3_chain()?,
            other => return Err(Error::Config(format!("odometer.chain {other:?} unknown"))),
        };
        let mut violations = Vec::new();
        let mut level_info = Vec::new();
        let x = chain.identity_point();
        for level in 0..chain.levels().len() {
            let report = uniform_invariance_check(&chain, level)?;
            violations.extend(report.violations.iter().cloned());
            let stab = stabilizer_level(&chain, &x, level)?;
            if stab.index != chain.levels()[level].order {
                violations.push(format!("level {level}: stabilizer is not the kernel"));
            }
            level_info.push(json!({
                "level": level,
                "order": chain.levels()[level].order,
                "stabilizer_index": stab.index,
            }));
        }
        if cfg.odometer.fault_inject {
            let mut tables = chain.levels()[0].gen_images.clone();
            tables[0][1] = tables[0][0];
            let report = uniform_invariance_check_tables(&tables, chain.levels()[0].order);
            if report.passed() {
                violations.push("fault injection went undetected".to_string());
            } else {
                violations.push(format!(
                    "fault injected at level 0 generator 0: {}",
                    report.violations[0]
                ));
            }
        }
        Ok(
            Certificate::new("odometer-chain", verdict_of(&violations), seed)
                .with_param("chain", cfg.odometer.chain.clone())
                .with_param("levels", chain.levels().len() as u64)
                .with_witness(Value::Array(level_info))
                .with_witnesses(violations.iter().map(|v| Value::String(v.clone()))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(name: &str, toml: &str, seed: u64) -> Result<Certificate> {
        let cfg = ExperimentConfig::parse(toml).unwrap();
        registry()[name].run(&cfg, seed)
    }

    #[test]
    fn registry_contains_every_subcommand() {
        let names: Vec<&str> = registry().keys().copied().collect();
        assert_eq!(
            names,
            vec![
                "af-audit",
                "diagonal",
                "folner-audit",
                "invariance-check",
                "measure-solve",
                "odometer-check",
                "pi-obstruct",
                "twisted-measure-solve",
                "witness-effective",
                "witness-minimal",
            ]
        );
    }

    #[test]
    fn measure_solve_passes_at_small_depth() {
        let cert = run("measure-solve", "[scale]\ndepth = 3", 0).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
    }

    #[test]
    fn af_audit_integers_violates_f2_bound() {
        let cert = run(
            "af-audit",
            r#"
            [group]
            kind = "integers"

            [audit]
            fiber_family = "shift-orbit"
            interval_max = 50
            delta = "1"
            "#,
            0,
        )
        .unwrap();
        assert_eq!(cert.verdict, Verdict::Fail);
        assert_eq!(
            cert.parameters["min_deficiency"],
            Value::String("1/25".to_string())
        );
    }

    #[test]
    fn determinism_same_seed_same_certificate() {
        let toml = "[witness]\ncount = 20";
        let a = run("witness-effective", toml, 9).unwrap();
        let b = run("witness-effective", toml, 9).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let c = run("af-audit", "[audit]\nfiber_count = 10", 3).unwrap();
        let d = run("af-audit", "[audit]\nfiber_count = 10", 3).unwrap();
        assert_eq!(c.to_json(), d.to_json());
    }

    #[test]
    fn witness_auditors_pass() {
        let toml = "[witness]\ncount = 50";
        assert_eq!(run("witness-minimal", toml, 1).unwrap().verdict, Verdict::Pass);
        assert_eq!(run("witness-effective", toml, 1).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn pi_obstruct_verdicts() {
        assert_eq!(run("pi-obstruct", "", 0).unwrap().verdict, Verdict::Pass);
        let cert = run("pi-obstruct", "[pi]\nu = [\"0\"]\nv = []", 0).unwrap();
        assert_eq!(cert.verdict, Verdict::Fail);
    }

    #[test]
    fn odometer_fault_injection_reports_failure() {
        let ok = run("odometer-check", "", 0).unwrap();
        assert_eq!(ok.verdict, Verdict::Pass);
        let faulted = run("odometer-check", "[odometer]\nfault_inject = true", 0).unwrap();
        assert_eq!(faulted.verdict, Verdict::Fail);
        assert!(faulted
            .witnesses
            .iter()
            .any(|w| w.to_string().contains("fault injected")));
    }

    #[test]
    fn folner_audit_reports_exact_minimum_for_integers() {
        let cert = run(
            "folner-audit",
            "[group]\nkind = \"integers\"\n\n[folner]\ninterval_max = 100",
            0,
        )
        .unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
        assert_eq!(
            cert.parameters["min_deficiency"],
            Value::String("1/50".to_string())
        );
    }
}
