//! Randomized verification harness.
//!
//! Every trial draws a linked target space, a column-consistent kernel onto
//! it with a linked source, and random functions, then runs every formula
//! check plus the oracle cross-checks. The identities are theorems for this
//! data model, so any failure indicates an implementation bug — except under
//! `inject_fault`, which deliberately perturbs one kernel entry (with
//! validation waived) to prove the harness can see failures at all.
//!
//! Trials are seeded per-index on independent ChaCha streams, so a report is
//! a pure function of `(seed, trials, max_strata, inject_fault)` and its
//! JSON form is byte-identical across runs.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use stratachi_core::constructible::hat_function;
use stratachi_core::ic::{
    hat_ic_function, k_decompose, k_stalks, LinkSystem,
};
use stratachi_core::poset::{Space, StratumId};
use stratachi_core::pushforward::{pushforward, verify_compare, verify_ichi_mult, ProperMapKernel};
use stratachi_core::random;
use stratachi_core::report::Formula;
use stratachi_core::{ConstrFn, Error};

use crate::documents::{CounterexampleDocument, MapDocument, ResolvedMap};
use crate::verify::run_map_formula;

#[derive(Debug, Clone, Copy)]
pub struct FuzzParams {
    pub seed: u64,
    pub trials: u64,
    pub max_strata: usize,
    pub inject_fault: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub trial: u64,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub trials: u64,
    pub max_strata: usize,
    pub inject_fault: bool,
    /// Pass counts per check name.
    pub checks: BTreeMap<String, u64>,
    pub failures: Vec<FailureRecord>,
    /// Minimized reproducer for the first failure, when one exists.
    pub counterexample: Option<CounterexampleDocument>,
    pub all_passed: bool,
}

struct TrialInstance {
    target: Space,
    target_links: LinkSystem,
    source: Space,
    source_links: LinkSystem,
    kernel: ProperMapKernel,
    alpha: ConstrFn,
    beta: ConstrFn,
    /// Second stage for the functoriality cross-check.
    pre_kernel: ProperMapKernel,
    gamma: ConstrFn,
}

fn resolved(inst: &TrialInstance) -> ResolvedMap {
    ResolvedMap {
        source: inst.source.clone(),
        source_links: Some(inst.source_links.clone()),
        target: inst.target.clone(),
        target_links: Some(inst.target_links.clone()),
        kernel: inst.kernel.clone(),
    }
}

fn generate(rng: &mut ChaCha8Rng, max_strata: usize, inject_fault: bool) -> TrialInstance {
    let (target, target_links) = loop {
        let (t, l) = random::linked_space(rng, max_strata, true);
        // A fault is numerically visible only through a nonzero χ_c weight.
        if !inject_fault || t.strata().any(|s| s.chi_c != 0) {
            break (t, l);
        }
    };
    let (source, source_links, mut kernel) = random::map_onto(rng, &target, max_strata);
    let alpha = if inject_fault {
        ConstrFn::constant(&source, 1)
    } else {
        random::function(rng, &source)
    };
    let beta = random::function(rng, &target);
    if inject_fault {
        let v0 = target
            .strata()
            .position(|s| s.chi_c != 0)
            .expect("target resampled until a nonzero weight exists");
        let u0 = rng.gen_range(0..source.len());
        let mut entries = kernel.entries();
        let tid = target.stratum_at(v0).id.clone();
        let sid = source.stratum_at(u0).id.clone();
        let mut bumped = false;
        for e in &mut entries {
            if e.0 == tid && e.1 == sid {
                e.2 += 1;
                bumped = true;
            }
        }
        if !bumped {
            entries.push((tid, sid, 1));
        }
        kernel = ProperMapKernel::build(&source, &target, &entries, false)
            .expect("perturbed kernel still builds unvalidated");
    }
    let (pre_source, _, pre_kernel) = random::map_onto(rng, &source, max_strata);
    let gamma = random::function(rng, &pre_source);
    TrialInstance {
        target,
        target_links,
        source,
        source_links,
        kernel,
        alpha,
        beta,
        pre_kernel,
        gamma,
    }
}

type CheckOutcome = Result<(bool, String), Error>;

fn formula_outcome(
    formula: Formula,
    map: &ResolvedMap,
    alpha: Option<&ConstrFn>,
) -> CheckOutcome {
    match run_map_formula(formula, map, alpha) {
        Ok(r) => Ok((r.pass, format!("lhs = {}, rhs = {}", r.lhs, r.rhs))),
        Err(crate::CliError::Core(e)) => Err(e),
        Err(other) => Ok((false, other.to_string())),
    }
}

/// All per-trial checks, in a fixed order. Returns `(name, outcome)` pairs.
fn run_all_checks(inst: &TrialInstance) -> Vec<(&'static str, CheckOutcome)> {
    let map = resolved(inst);
    let one_target = ConstrFn::constant(&inst.target, 1);
    let mut out: Vec<(&'static str, CheckOutcome)> = Vec::new();

    for f in [
        Formula::Eq3,
        Formula::Eq4,
        Formula::Eq5,
        Formula::Eq6,
        Formula::Eq7,
        Formula::Eq12,
        Formula::Eq13,
        Formula::Eq14,
        Formula::Eq15,
        Formula::Eq16,
        Formula::Eq17,
        Formula::Eq18,
    ] {
        out.push((f.code(), formula_outcome(f, &map, Some(&inst.alpha))));
    }
    out.push((
        "eq11",
        (|| {
            let r = stratachi_core::ic::verify_ic_decomposition(&inst.target_links, &inst.beta)?;
            Ok((r.pass, format!("lhs = {}, rhs = {}", r.lhs, r.rhs)))
        })(),
    ));
    out.push((
        "c1",
        (|| {
            let r = verify_compare(&inst.target_links)?;
            Ok((r.pass, format!("lhs = {}, rhs = {}", r.lhs, r.rhs)))
        })(),
    ));
    out.push((
        "c2",
        (|| {
            let id = ProperMapKernel::identity(&inst.target);
            let r = stratachi_core::hom::verify_class_pushforward_ic(
                &id,
                &one_target,
                &inst.target_links,
                Formula::C2,
            )?;
            Ok((r.pass, format!("lhs = {}, rhs = {}", r.lhs, r.rhs)))
        })(),
    ));

    // Oracle cross-checks.
    out.push((
        "chi-pushforward",
        (|| {
            let pf = pushforward(&inst.kernel, &inst.alpha)?;
            let (l, r) = (inst.alpha.euler()?, pf.euler()?);
            Ok((l == r, format!("χ(α) = {l}, χ(f∗α) = {r}")))
        })(),
    ));
    out.push((
        "functoriality",
        (|| {
            let composite = ProperMapKernel::compose(&inst.kernel, &inst.pre_kernel)?;
            let direct = pushforward(&composite, &inst.gamma)?;
            let staged =
                pushforward(&inst.kernel, &pushforward(&inst.pre_kernel, &inst.gamma)?)?;
            Ok((direct == staged, "composite vs staged pushforward".into()))
        })(),
    ));
    out.push((
        "hat-pointwise",
        (|| {
            for s in inst.target.strata() {
                if hat_function(&inst.target, &s.id)?
                    != ConstrFn::indicator(&inst.target, &s.id)?
                {
                    return Ok((false, format!("ĥ1({}) is not the open indicator", s.id)));
                }
            }
            Ok((true, String::new()))
        })(),
    ));
    out.push((
        "ic-hat-pointwise",
        (|| {
            for s in inst.target.strata() {
                if hat_ic_function(&inst.target_links, &s.id)?
                    != ConstrFn::indicator(&inst.target, &s.id)?
                {
                    return Ok((false, format!("îc({}) is not the open indicator", s.id)));
                }
            }
            Ok((true, String::new()))
        })(),
    ));
    out.push((
        "hat-roundtrip",
        (|| {
            let ok = inst.beta.decompose_hat().recompose(None)? == inst.beta;
            Ok((ok, String::new()))
        })(),
    ));
    out.push((
        "hat-dense-roundtrip",
        (|| {
            let ok = inst.beta.decompose_hat_dense()?.recompose(None)? == inst.beta;
            Ok((ok, String::new()))
        })(),
    ));
    out.push((
        "closed-roundtrip",
        (|| {
            let ok = inst.beta.decompose_closed()?.recompose(None)? == inst.beta;
            Ok((ok, String::new()))
        })(),
    ));
    out.push((
        "ic-roundtrip",
        (|| {
            let dense = stratachi_core::ic::decompose_ic(&inst.target_links, &inst.beta)?
                .recompose(Some(&inst.target_links))?;
            let pure = stratachi_core::ic::decompose_ic_pure(&inst.target_links, &inst.beta)?
                .recompose(Some(&inst.target_links))?;
            Ok((dense == inst.beta && pure == inst.beta, String::new()))
        })(),
    ));
    out.push((
        "k-roundtrip",
        (|| {
            let class = {
                // Deterministic class from beta's values.
                let coeffs: BTreeMap<StratumId, i64> = inst.beta.to_map();
                stratachi_core::ic::KClass::from_map(&inst.target, &coeffs)?
            };
            let stalks = k_stalks(&class, &inst.target_links)?;
            let stalk_map: BTreeMap<StratumId, i64> = inst
                .target
                .strata()
                .zip(stalks.iter())
                .map(|(s, v)| (s.id.clone(), *v))
                .collect();
            let back = k_decompose(&stalk_map, &inst.target_links)?;
            let f = class.to_fn(&inst.target_links)?;
            let compat = inst
                .target
                .strata()
                .zip(stalks.iter())
                .all(|(s, v)| f.value(&s.id).map(|x| x == *v).unwrap_or(false));
            Ok((back == class && compat, String::new()))
        })(),
    ));
    out.push((
        "inverse-identity",
        (|| {
            let m = stratachi_core::ic::ic_transition_matrix(&inst.target_links);
            let inv = m.inverse()?;
            let ok = m.mul(&inv)?.is_identity()
                && inv.mul(&m)?.is_identity()
                && inv.inverse()? == m;
            Ok((ok, String::new()))
        })(),
    ));
    out.push((
        "compare-coherence",
        (|| {
            let id = ProperMapKernel::identity(&inst.target);
            let via_mult =
                verify_ichi_mult(&id, &one_target, &inst.target_links, Formula::Eq13)?;
            let compare = verify_compare(&inst.target_links)?;
            Ok((
                via_mult.lhs == compare.lhs
                    && via_mult.rhs == compare.rhs
                    && via_mult.terms == compare.terms,
                String::new(),
            ))
        })(),
    ));
    out
}

/// Checks whose failing instance can be replayed through `verify` with a
/// map document and a function document.
fn minimizable(check: &str) -> Option<Formula> {
    Formula::from_code(check).filter(|f| {
        matches!(
            f,
            Formula::Eq3
                | Formula::Eq4
                | Formula::Eq5
                | Formula::Eq12
                | Formula::Eq13
                | Formula::Eq14
        )
    })
}

struct Shrinkable {
    source: Space,
    source_links: LinkSystem,
    target: Space,
    target_links: LinkSystem,
    kernel_entries: Vec<(StratumId, StratumId, i64)>,
    alpha: BTreeMap<StratumId, i64>,
}

impl Shrinkable {
    fn from_instance(inst: &TrialInstance) -> Shrinkable {
        Shrinkable {
            source: inst.source.clone(),
            source_links: inst.source_links.clone(),
            target: inst.target.clone(),
            target_links: inst.target_links.clone(),
            kernel_entries: inst.kernel.entries(),
            alpha: inst.alpha.to_map(),
        }
    }

    fn still_fails(&self, formula: Formula) -> bool {
        let kernel = match ProperMapKernel::build(
            &self.source,
            &self.target,
            &self.kernel_entries,
            false,
        ) {
            Ok(k) => k,
            Err(_) => return false,
        };
        let alpha = match ConstrFn::from_map(&self.source, &self.alpha) {
            Ok(a) => a,
            Err(_) => return false,
        };
        let map = ResolvedMap {
            source: self.source.clone(),
            source_links: Some(self.source_links.clone()),
            target: self.target.clone(),
            target_links: Some(self.target_links.clone()),
            kernel,
        };
        match run_map_formula(formula, &map, Some(&alpha)) {
            Ok(r) => !r.pass,
            Err(_) => false,
        }
    }

    fn without_target_stratum(&self, id: &StratumId) -> Option<Shrinkable> {
        if self.target.len() <= 1 || self.target.dense_stratum().map(|s| &s.id) == Some(id) {
            return None;
        }
        let keep: std::collections::BTreeSet<StratumId> = self
            .target
            .strata()
            .map(|s| s.id.clone())
            .filter(|s| s != id)
            .collect();
        let target: Space = std::sync::Arc::new(self.target.restriction(&keep).ok()?);
        let target_links = self.target_links.restrict(&target).ok()?;
        let kernel_entries = self
            .kernel_entries
            .iter()
            .filter(|(t, _, _)| t != id)
            .cloned()
            .collect();
        Some(Shrinkable {
            source: self.source.clone(),
            source_links: self.source_links.clone(),
            target,
            target_links,
            kernel_entries,
            alpha: self.alpha.clone(),
        })
    }

    fn without_source_stratum(&self, id: &StratumId) -> Option<Shrinkable> {
        if self.source.len() <= 1 {
            return None;
        }
        let keep: std::collections::BTreeSet<StratumId> = self
            .source
            .strata()
            .map(|s| s.id.clone())
            .filter(|s| s != id)
            .collect();
        let source: Space = std::sync::Arc::new(self.source.restriction(&keep).ok()?);
        let source_links = self.source_links.restrict(&source).ok()?;
        let kernel_entries = self
            .kernel_entries
            .iter()
            .filter(|(_, s, _)| s != id)
            .cloned()
            .collect();
        let mut alpha = self.alpha.clone();
        alpha.remove(id);
        Some(Shrinkable {
            source,
            source_links,
            target: self.target.clone(),
            target_links: self.target_links.clone(),
            kernel_entries,
            alpha,
        })
    }
}

/// Greedy minimization: drop strata one at a time while the failure
/// persists.
fn minimize(inst: &TrialInstance, formula: Formula) -> Shrinkable {
    let mut current = Shrinkable::from_instance(inst);
    loop {
        let mut progressed = false;
        let target_ids: Vec<StratumId> = current.target.strata().map(|s| s.id.clone()).collect();
        for id in target_ids {
            if let Some(cand) = current.without_target_stratum(&id) {
                if cand.still_fails(formula) {
                    current = cand;
                    progressed = true;
                    break;
                }
            }
        }
        if progressed {
            continue;
        }
        let source_ids: Vec<StratumId> = current.source.strata().map(|s| s.id.clone()).collect();
        for id in source_ids {
            if let Some(cand) = current.without_source_stratum(&id) {
                if cand.still_fails(formula) {
                    current = cand;
                    progressed = true;
                    break;
                }
            }
        }
        if !progressed {
            break;
        }
    }
    current
}

fn counterexample_document(check: &str, inst: &TrialInstance) -> CounterexampleDocument {
    let (formula_code, shrunk) = match minimizable(check) {
        Some(f) if Shrinkable::from_instance(inst).still_fails(f) => {
            (f.code().to_owned(), minimize(inst, f))
        }
        _ => (check.to_owned(), Shrinkable::from_instance(inst)),
    };
    let kernel = ProperMapKernel::build(
        &shrunk.source,
        &shrunk.target,
        &shrunk.kernel_entries,
        false,
    )
    .expect("shrunken kernels build unvalidated");
    CounterexampleDocument {
        formula: formula_code,
        map: MapDocument::from_parts(
            ("counterexample-source", &shrunk.source, Some(&shrunk.source_links)),
            ("counterexample-target", &shrunk.target, Some(&shrunk.target_links)),
            &kernel,
            true,
        ),
        function: shrunk
            .alpha
            .iter()
            .map(|(k, v)| (k.as_str().to_owned(), *v))
            .collect(),
    }
}

pub fn run_fuzz(params: &FuzzParams) -> FuzzReport {
    let mut checks: BTreeMap<String, u64> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut counterexample = None;
    for trial in 0..params.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(trial + 1);
        let inst = generate(&mut rng, params.max_strata.max(1), params.inject_fault);
        for (name, outcome) in run_all_checks(&inst) {
            let (passed, detail) = match outcome {
                Ok((p, d)) => (p, d),
                Err(e) => (false, e.to_string()),
            };
            if passed {
                *checks.entry(name.to_owned()).or_insert(0) += 1;
            } else {
                if counterexample.is_none() {
                    counterexample = Some(counterexample_document(name, &inst));
                }
                failures.push(FailureRecord {
                    trial,
                    check: name.to_owned(),
                    detail,
                });
            }
        }
    }
    FuzzReport {
        seed: params.seed,
        trials: params.trials,
        max_strata: params.max_strata,
        inject_fault: params.inject_fault,
        all_passed: failures.is_empty(),
        checks,
        failures,
        counterexample,
    }
}
