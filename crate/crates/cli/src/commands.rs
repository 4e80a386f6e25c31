use nilkilling::catalog;
use nilkilling::classify::{
    classify as classify_exact, classify_in, decomposable_killing_space, sufficient_decomposable,
    BlockCertificate, Classification, Classified, DecomposableReason, Verdict,
};
use nilkilling::derivations::skew_derivations;
use nilkilling::flow::{
    drift, integrate, seeded_initial_states, velocity_error, FirstIntegral, FlowError,
};
use nilkilling::format::{self, Metric};
use nilkilling::killing::{
    is_killing, killing_space, killing_two_forms, parallel_space, KillingViolation,
};
use nilkilling::liealg::{
    ideal_decomposition, is_nonsingular, j_injective, orthonormalize, validate as validate_algebra,
    ComponentKind, MetricLieAlgebra, Nonsingularity, Violation,
};
use nilkilling::linalg::Matrix;
use nilkilling::oracle::{
    crosscheck as run_crosscheck, DecomposabilityOracle, KillingField, OmegaPolynomial, SpanLabel,
};
use nilkilling::scalar::Rational;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::input::{load, prepare, NamedTensors, Prepared};
use crate::report::{envelope, matrices, matrix, render, vector, vectors, ReportScalar};
use crate::{Source, TensorSelection};

fn violation_json(v: &Violation, names: &[String]) -> Value {
    let triple = |kind: &str, i: usize, j: usize, k: usize| {
        json!({
            "kind": kind,
            "indices": [i, j, k],
            "basis": [names[i], names[j], names[k]],
            "message": v.to_string(),
        })
    };
    match *v {
        Violation::NotAntisymmetric { i, j, k } => triple("NotAntisymmetric", i, j, k),
        Violation::JacobiFails { i, j, k } => triple("JacobiFails", i, j, k),
        Violation::NotTwoStep { i, j, k } => triple("NotTwoStep", i, j, k),
        Violation::Abelian => json!({ "kind": "Abelian", "message": v.to_string() }),
    }
}

/// Prints the verdict; an invalid algebra still produces a report, with exit code 1.
pub fn validate(source: &Source) -> Result<String, CliError> {
    let file = load(source)?;
    let names = file.constants.names().to_vec();
    let metric = match &file.metric {
        Metric::Identity => "identity",
        Metric::Gram(_) => "gram",
    };
    match validate_algebra(file.constants.clone()) {
        Ok(_) => {
            if let Metric::Gram(g) = &file.metric {
                orthonormalize(&file.constants.to_float(), &g.to_float())?;
            }
            let body = json!({ "valid": true, "dim": names.len(), "basis": names, "metric": metric, "violations": [] });
            Ok(render(&envelope("validate", None, body)))
        }
        Err(e) => {
            let violations: Vec<Value> = e
                .violations
                .iter()
                .map(|v| violation_json(v, &names))
                .collect();
            let body = json!({
                "valid": false,
                "dim": names.len(),
                "basis": names,
                "metric": metric,
                "violations": violations,
            });
            Err(CliError::Rejected {
                report: envelope("validate", None, body),
                message: e.to_string(),
            })
        }
    }
}

fn nonsingularity_json<F: ReportScalar>(n: &Nonsingularity<F>) -> Value {
    match n {
        Nonsingularity::Singular { witness } => {
            json!({ "status": "singular", "witness": vector(witness) })
        }
        Nonsingularity::ProbablyNonsingular { samples, seed } => {
            json!({ "status": "probably-nonsingular", "samples": samples, "seed": seed })
        }
        Nonsingularity::Nonsingular => json!({ "status": "nonsingular" }),
    }
}

fn kind_name(kind: ComponentKind) -> &'static str {
    match kind {
        ComponentKind::Irreducible => "irreducible",
        ComponentKind::Abelian => "abelian",
    }
}

fn analyze_in<F: ReportScalar>(
    alg: &MetricLieAlgebra<F>,
    samples: usize,
    seed: u64,
) -> Result<Value, CliError> {
    let split = alg.split();
    let jmap = alg.j_map();
    let der = skew_derivations(alg)?;
    let killing = killing_space(alg);
    let parallel = parallel_space(alg)?;
    let forms = killing_two_forms(alg)?;
    let dec = ideal_decomposition(alg)?;
    let nonsingular = is_nonsingular(alg, samples, seed);
    let decomposable = decomposable_killing_space(alg)?;
    let sufficient = sufficient_decomposable(alg)?.map(|r| match r {
        DecomposableReason::DimCenterOne => "dim-center-one",
        DecomposableReason::AbelianExceptOne => "abelian-except-one",
    });
    let components: Vec<Value> = dec
        .components
        .iter()
        .map(|c| {
            json!({
                "kind": kind_name(c.kind),
                "dim": c.space.dim(),
                "basis": vectors(c.space.vectors()),
                "complement_dim": c.complement_part.dim(),
                "center_dim": c.center_part.dim(),
            })
        })
        .collect();
    let j_maps: Vec<Value> = jmap
        .center_basis
        .iter()
        .zip(&jmap.operators)
        .map(|(z, op)| json!({ "z": vector(z), "j": matrix(op) }))
        .collect();
    Ok(json!({
        "basis": alg.names(),
        "dims": {
            "n": alg.dim(),
            "z": split.center.dim(),
            "v": split.complement.dim(),
            "derived": split.derived.dim(),
            "abelian_factor": split.abelian_factor.dim(),
            "der_a": der.dim(),
            "killing": killing.dim(),
            "decomposable_killing": decomposable.dim(),
            "parallel": parallel.space.dim(),
            "killing_two_forms": forms.dim(),
        },
        "center": vectors(split.center.vectors()),
        "complement": vectors(split.complement.vectors()),
        "derived": vectors(split.derived.vectors()),
        "abelian_factor": vectors(split.abelian_factor.vectors()),
        "j_maps": j_maps,
        "j_injective": j_injective(alg),
        "der_a": matrices(der.basis()),
        "killing": matrices(killing.basis()),
        "decomposable_killing": matrices(decomposable.basis()),
        "parallel": matrices(parallel.space.basis()),
        "killing_two_forms": matrices(forms.basis()),
        "ideal_decomposition": components,
        "nonsingularity": nonsingularity_json(&nonsingular),
        "sufficient_decomposable": sufficient,
    }))
}

pub fn analyze(source: &Source, samples: usize, seed: u64) -> Result<Value, CliError> {
    let prepared = prepare(source, &TensorSelection::default(), false, false)?;
    let body = match &prepared {
        Prepared::Exact { algebra, .. } => analyze_in(algebra, samples, seed)?,
        Prepared::Float { algebra, .. } => analyze_in(algebra, samples, seed)?,
    };
    Ok(envelope("analyze", Some(prepared.mode()), body))
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Decomposable => "decomposable",
        Verdict::Indecomposable => "indecomposable",
    }
}

fn certificate_json<F: ReportScalar>(c: &BlockCertificate<F>) -> Value {
    match c {
        BlockCertificate::Parallel => json!({ "type": "parallel" }),
        BlockCertificate::SingleEigenvalue { shift } => {
            json!({ "type": "single-eigenvalue", "shift": shift.to_json() })
        }
        BlockCertificate::Extends {
            shift,
            eigenvalues,
            center_basis,
            derivations,
        } => json!({
            "type": "extends",
            "shift": shift.to_json(),
            "eigenvalues": vector(eigenvalues),
            "center_basis": vectors(center_basis),
            "derivations": matrices(derivations),
        }),
        BlockCertificate::Infeasible {
            eigenvalues,
            witness,
        } => json!({
            "type": "infeasible",
            "eigenvalues": vector(eigenvalues),
            "witness": {
                "left_kernel": vector(&witness.left_kernel),
                "pairing": witness.pairing.to_json(),
                "rank": witness.rank,
                "augmented_rank": witness.augmented_rank,
            },
        }),
    }
}

fn classification_json<F: ReportScalar>(name: &str, c: &Classification<F>) -> Value {
    let blocks: Vec<Value> = c
        .blocks
        .iter()
        .map(|b| {
            json!({
                "component": b.component,
                "kind": kind_name(b.kind),
                "verdict": verdict_name(b.certificate.verdict()),
                "certificate": certificate_json(&b.certificate),
            })
        })
        .collect();
    let fast = c
        .fast_indecomposable
        .map(|p| json!({ "component": p.component, "first": p.first, "second": p.second }));
    json!({
        "name": name,
        "verdict": verdict_name(c.verdict),
        "exact": c.exact,
        "blocks": blocks,
        "fast_indecomposable": fast,
    })
}

fn verdict_summary(entries: &[Value]) -> Value {
    let count = |v: &str| entries.iter().filter(|e| e["verdict"] == v).count();
    json!({ "decomposable": count("decomposable"), "indecomposable": count("indecomposable") })
}

pub fn classify(source: &Source, sel: &TensorSelection) -> Result<Value, CliError> {
    let prepared = prepare(source, sel, sel.all_killing_basis, true)?;
    let entries: Vec<Value> = match &prepared {
        Prepared::Exact { algebra, tensors } => tensors
            .iter()
            .map(|(name, s)| {
                require_killing(algebra, name, s)?;
                Ok(match classify_exact(algebra, s)? {
                    Classified::Exact(c) => classification_json(name, &c),
                    Classified::Numerical(c) => classification_json(name, &c),
                })
            })
            .collect::<Result<_, CliError>>()?,
        Prepared::Float { algebra, tensors } => tensors
            .iter()
            .map(|(name, s)| {
                require_killing(algebra, name, s)?;
                Ok(classification_json(name, &classify_in(algebra, s)?))
            })
            .collect::<Result<_, CliError>>()?,
    };
    let body = json!({ "summary": verdict_summary(&entries), "tensors": entries });
    Ok(envelope("classify", Some(prepared.mode()), body))
}

fn exact_only(
    prepared: Prepared,
    command: &str,
) -> Result<(MetricLieAlgebra<Rational>, NamedTensors<Rational>), CliError> {
    match prepared {
        Prepared::Exact { algebra, tensors } => Ok((algebra, tensors)),
        Prepared::Float { .. } => Err(CliError::Refused(format!(
            "'{command}' needs exact arithmetic and is unavailable for Gram-matrix input"
        ))),
    }
}

fn span_label(label: SpanLabel, generators: &[String]) -> String {
    match label {
        SpanLabel::Parallel(q) => format!("parallel[{q}]"),
        SpanLabel::Product(a, b) => format!("{}*{}", generators[a], generators[b]),
    }
}

fn require_killing<F: ReportScalar>(
    alg: &MetricLieAlgebra<F>,
    name: &str,
    s: &Matrix<F>,
) -> Result<(), CliError> {
    let check = is_killing(alg, s)?;
    if check.is_killing {
        return Ok(());
    }
    let detail = match check.worst {
        Some(KillingViolation::ComplementPair { a, b, .. }) => {
            format!("complement pair ({a}, {b})")
        }
        Some(KillingViolation::CenterPair { a, b, c, .. }) => {
            format!("center triple ({a}, {b}, {c})")
        }
        None => "unknown condition".into(),
    };
    Err(CliError::Usage(format!(
        "tensor '{name}' is not Killing: fails on {detail}"
    )))
}

pub fn oracle(source: &Source, sel: &TensorSelection, cap: usize) -> Result<Value, CliError> {
    let (alg, tensors) = exact_only(prepare(source, sel, sel.all_killing_basis, true)?, "oracle")?;
    let mut oracle = DecomposabilityOracle::new(&alg, cap)?;
    let mut derivation_count = 0;
    let generators: Vec<String> = oracle
        .generator_fields
        .iter()
        .enumerate()
        .map(|(i, f)| match f {
            KillingField::Translation(_) => format!("xi[{}]", alg.names()[i]),
            KillingField::Derivation(_) => {
                derivation_count += 1;
                format!("xi[der{}]", derivation_count - 1)
            }
        })
        .collect();
    let derivations: Vec<Matrix<Rational>> = oracle
        .generator_fields
        .iter()
        .filter_map(|f| match f {
            KillingField::Derivation(d) => Some(d.clone()),
            KillingField::Translation(_) => None,
        })
        .collect();

    let mut entries = Vec::new();
    for (name, s) in &tensors {
        require_killing(&alg, name, s)?;
        let membership = oracle.membership(s);
        let classifier = classify_exact(&alg, s)?.verdict();
        let verdict = membership.verdict();
        if verdict != classifier {
            return Err(CliError::Internal(format!(
                "oracle says {} but the classifier says {} for '{name}'",
                verdict_name(verdict),
                verdict_name(classifier)
            )));
        }
        let expansion = match &membership {
            nilkilling::oracle::Membership::Member { coefficients } => {
                if oracle.expand(coefficients) != OmegaPolynomial::constant(s) {
                    return Err(CliError::Internal(format!(
                        "oracle expansion for '{name}' does not reproduce it"
                    )));
                }
                let terms: Vec<Value> = coefficients
                    .iter()
                    .map(|(l, c)| json!({ "term": span_label(*l, &generators), "coefficient": c.to_json() }))
                    .collect();
                Value::Array(terms)
            }
            nilkilling::oracle::Membership::NotMember => Value::Null,
        };
        entries.push(json!({
            "name": name,
            "verdict": verdict_name(verdict),
            "classifier_agrees": true,
            "expansion": expansion,
        }));
    }
    let body = json!({
        "oracle_cap": cap,
        "generators": generators,
        "derivations": matrices(&derivations),
        "parallel": matrices(&oracle.parallel_basis),
        "spanning_dim": oracle.spanning_dim(),
        "summary": verdict_summary(&entries),
        "tensors": entries,
    });
    Ok(envelope("oracle", Some("exact"), body))
}

pub struct FlowParams {
    pub t_max: f64,
    pub steps: usize,
    pub seed: u64,
    pub states: usize,
}

fn flow_usage(e: FlowError) -> CliError {
    CliError::Usage(e.to_string())
}

pub fn flow(
    source: &Source,
    sel: &TensorSelection,
    params: &FlowParams,
) -> Result<Value, CliError> {
    let prepared = prepare(source, sel, sel.all_killing_basis, true)?;
    let mode = prepared.mode();
    let (alg, tensors, killing): (MetricLieAlgebra<f64>, NamedTensors<f64>, Vec<bool>) =
        match prepared {
            Prepared::Exact { algebra, tensors } => {
                let killing = tensors
                    .iter()
                    .map(|(_, s)| Ok(is_killing(&algebra, s)?.is_killing))
                    .collect::<Result<_, CliError>>()?;
                let floats = tensors
                    .into_iter()
                    .map(|(n, s)| (n, s.to_float()))
                    .collect();
                (algebra.to_float(), floats, killing)
            }
            Prepared::Float { algebra, tensors } => {
                let killing = tensors
                    .iter()
                    .map(|(_, s)| Ok(is_killing(&algebra, s)?.is_killing))
                    .collect::<Result<_, CliError>>()?;
                (algebra, tensors, killing)
            }
        };
    let mut drifts = vec![Vec::new(); tensors.len()];
    let mut max_velocity_error: f64 = 0.0;
    for (w0, y0) in seeded_initial_states(alg.dim(), params.states, params.seed) {
        let traj = integrate(&alg, &w0, &y0, params.t_max, params.steps).map_err(flow_usage)?;
        max_velocity_error = max_velocity_error.max(velocity_error(&alg, &traj));
        for (k, (_, s)) in tensors.iter().enumerate() {
            drifts[k].push(drift(FirstIntegral::Tensor(s), &traj));
        }
    }
    let entries: Vec<Value> = tensors
        .iter()
        .zip(&drifts)
        .zip(&killing)
        .map(|(((name, _), d), is_k)| {
            json!({
                "name": name,
                "killing": is_k,
                "max_drift": d.iter().copied().fold(0.0, f64::max),
                "drift_per_state": d,
            })
        })
        .collect();
    let body = json!({
        "t_max": params.t_max,
        "steps": params.steps,
        "step": params.t_max / params.steps as f64,
        "seed": params.seed,
        "states": params.states,
        "max_velocity_error": max_velocity_error,
        "tensors": entries,
    });
    Ok(envelope("flow", Some(mode), body))
}

pub fn examples_list() -> Value {
    envelope(
        "examples list",
        None,
        json!({ "examples": catalog::list() }),
    )
}

pub fn examples_emit(name: &str) -> Result<String, CliError> {
    Ok(format::emit(&catalog::lookup(name)?))
}

pub fn crosscheck(
    source: &Source,
    extras: &TensorSelection,
    random: usize,
    seed: u64,
    cap: usize,
) -> Result<Value, CliError> {
    let (alg, extra) = exact_only(prepare(source, extras, false, false)?, "crosscheck")?;
    for (name, s) in &extra {
        require_killing(&alg, name, s)?;
    }
    let report = run_crosscheck(&alg, &extra, random, seed, cap)?;
    let entries: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            json!({
                "name": e.label,
                "classifier": verdict_name(e.classifier),
                "oracle": verdict_name(e.oracle),
                "verdict": verdict_name(e.classifier),
                "classifier_numerical": e.numerical,
            })
        })
        .collect();
    let body = json!({
        "seed": report.seed,
        "random": random,
        "oracle_cap": cap,
        "all_agree": report.all_agree(),
        "summary": verdict_summary(&entries),
        "tensors": entries,
    });
    Ok(envelope("crosscheck", Some("exact"), body))
}
