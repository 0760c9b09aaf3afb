use std::collections::BTreeSet;

use okounkov::convbody::{okounkov_body, slice_comparison, BodyReport};
use okounkov::flagval::{filtered_dimension, semigroup_index};
use okounkov::glseries::{hilbert_data, TruncationBound};
use okounkov::monideal::{base_locus, base_ideal, full_volume_check, is_birational_monomial, saturate, sheafify};
use okounkov::surfacezar::{classify_boundary, surface_body, zariski, StratumKind, Valuativity};
use okounkov::{Flag, Rational, Scalar, Series};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cache;
use crate::envelope::{body_report, flag as flag_json, polytope, rational, vector, ResultEnvelope, SCHEMA_VERSION};
use crate::error::CliError;
use crate::job::{Command, JobSpec};
use crate::schema::{parse_series_str, parse_surface_str, read_input};
use crate::svg::{emit_svg, Plot};

struct Outcome {
    exact: bool,
    payload: Value,
}

pub fn run(job: &JobSpec) -> Result<ResultEnvelope, CliError> {
    job.validate()?;
    let text = read_input(&job.input)?;
    let digest = hex::encode(Sha256::digest(text.as_bytes()));
    if job.emit_svg.is_none() {
        if let Some(hit) = cache::load(job, &digest) {
            return Ok(hit);
        }
    }
    let source = job.input.display().to_string();
    let bound = TruncationBound::new(job.truncation)?;
    let outcome = match job.command {
        Command::Surface => surface(job, &parse_surface_str(&text, &source)?)?,
        command => {
            let series = parse_series_str(&text, &source)?;
            match command {
                Command::Body => body(job, &series, bound)?,
                Command::Slice => slice(job, &series, bound)?,
                Command::Volume => volume(job, &series, bound)?,
                Command::Sheafify => sheafified(&series, bound)?,
                Command::BaseLocus => locus(&series, bound)?,
                Command::Birational => birational(&series, bound)?,
                Command::GenericTest => generic_test(job, &series, bound)?,
                Command::FilteredDims => filtered_dims(job, &series, bound)?,
                Command::Fujita => fujita(job, &series, bound)?,
                Command::Surface => unreachable!("handled above"),
            }
        }
    };
    let seed = match job.command {
        Command::GenericTest => Some(job.seed),
        _ => job.flag.seed(),
    };
    let envelope = ResultEnvelope {
        schema: SCHEMA_VERSION,
        command: job.command.name().to_string(),
        truncation: job.truncation,
        exact: outcome.exact,
        payload: outcome.payload,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        input_digest: digest,
        seed,
    };
    cache::store(job, &envelope);
    Ok(envelope)
}

fn checked_body(series: &Series, flag: &Flag, bound: TruncationBound) -> Result<BodyReport<Rational>, CliError> {
    let report = okounkov_body(series, flag, bound)?;
    if !report.polytope.check_representation() {
        return Err(CliError::Invariant("vertex and facet descriptions disagree".into()));
    }
    Ok(report)
}

fn factorial(d: usize) -> Rational {
    (1..=d).fold(Rational::from_i64(1), |acc, i| acc * Rational::from_usize(i))
}

fn svg_if_requested(job: &JobSpec, plot: Plot<'_>) -> Result<(), CliError> {
    match &job.emit_svg {
        Some(path) => emit_svg(&plot, path),
        None => Ok(()),
    }
}

fn body(job: &JobSpec, series: &Series, bound: TruncationBound) -> Result<Outcome, CliError> {
    let flag = job.flag.build(series.ambient_dim())?;
    let report = checked_body(series, &flag, bound)?;
    svg_if_requested(job, Plot::Polygon(&report.polytope))?;
    let (rank, index) = semigroup_index(&report.semigroup);
    let normalized = factorial(series.ambient_dim()) * report.polytope.volume();
    Ok(Outcome {
        exact: report.is_exact(),
        payload: json!({
            "flag": flag_json(&flag),
            "body": body_report(&report),
            "d_factorial_volume": rational(&normalized),
            "semigroup": { "rank": rank, "index": index.to_string() },
        }),
    })
}

fn slice(job: &JobSpec, series: &Series, bound: TruncationBound) -> Result<Outcome, CliError> {
    let flag = job.flag.build(series.ambient_dim())?;
    let t = job.t.clone().expect("validated");
    let c = slice_comparison(series, &flag, &t, bound)?;
    Ok(Outcome {
        exact: c.direct_exact && c.formula_exact,
        payload: json!({
            "t": rational(&c.t),
            "a": c.numerator,
            "b": c.denominator,
            "direct": polytope(&c.direct),
            "direct_exact": c.direct_exact,
            "formula": polytope(&c.formula),
            "formula_exact": c.formula_exact,
            "equal": c.equal,
        }),
    })
}

fn volume(job: &JobSpec, series: &Series, bound: TruncationBound) -> Result<Outcome, CliError> {
    let flag = job.flag.build(series.ambient_dim())?;
    let h = hilbert_data::<Rational>(series, bound)?;
    let report = checked_body(series, &flag, bound)?;
    let (rank, index) = semigroup_index(&report.semigroup);
    let body_volume = report.polytope.volume();
    let rhs = factorial(series.ambient_dim()) * body_volume.clone();
    // vol(S•) · [ℤ^{d+1} : G(Γ)] = d! · vol(Δ)
    let lhs = index.finite().map(|i| h.volume.clone() * Rational::from_bigint(i).expect("integer"));
    let consistent = lhs.as_ref() == Some(&rhs);
    Ok(Outcome {
        exact: h.stabilized && report.is_exact(),
        payload: json!({
            "dims": h.dims,
            "hilbert_volume": rational(&h.volume),
            "stabilized": h.stabilized,
            "body_volume": rational(&body_volume),
            "body_exact": report.is_exact(),
            "d_factorial_body_volume": rational(&rhs),
            "lattice_rank": rank,
            "lattice_index": index.to_string(),
            "normalization": "hilbert_volume * lattice_index = d! * body_volume",
            "normalized_hilbert_volume": lhs.as_ref().map(rational),
            "consistent": consistent,
        }),
    })
}

fn exponents<'a>(it: impl Iterator<Item = &'a okounkov::polyform::Exponent>) -> Vec<Vec<u32>> {
    it.map(|e| e.entries().to_vec()).collect()
}

fn sheafified(series: &Series, bound: TruncationBound) -> Result<Outcome, CliError> {
    let sheaf = sheafify(series, bound)?;
    let mut levels = Vec::new();
    for k in 1..=bound.get() {
        let original = series.level(k, bound)?;
        let level = sheaf.level(k, bound)?;
        let before: BTreeSet<_> = original.pivots().cloned().collect();
        let added: Vec<Vec<u32>> = exponents(level.pivots().filter(|e| !before.contains(*e)));
        let saturated = saturate(&base_ideal(series, k, bound)?);
        levels.push(json!({
            "k": k,
            "dim": level.dim(),
            "original_dim": original.dim(),
            "added": added,
            "saturated_base_ideal": exponents(saturated.generators().iter()),
        }));
    }
    Ok(Outcome { exact: true, payload: json!({ "levels": levels }) })
}

fn locus(series: &Series, bound: TruncationBound) -> Result<Outcome, CliError> {
    let r = base_locus(series, bound)?;
    let ideals: Vec<Value> = r
        .ideals
        .iter()
        .enumerate()
        .map(|(i, ideal)| json!({ "k": i + 1, "generators": exponents(ideal.generators().iter()) }))
        .collect();
    Ok(Outcome {
        exact: r.stabilized,
        payload: json!({
            "components": r.components.iter().map(|c| c.iter().collect::<Vec<_>>()).collect::<Vec<_>>(),
            "empty": r.empty,
            "stabilized": r.stabilized,
            "base_ideals": ideals,
        }),
    })
}

fn birational(series: &Series, bound: TruncationBound) -> Result<Outcome, CliError> {
    let v = is_birational_monomial(series, bound)?;
    let f = full_volume_check::<Rational>(series, bound)?;
    let basis: Vec<Vec<String>> = v.basis.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    Ok(Outcome {
        exact: f.stabilized,
        payload: json!({
            "birational": v.birational,
            "difference_lattice_index": v.index.to_string(),
            "difference_lattice_basis": basis,
            "full_volume": {
                "volume": rational(&f.volume),
                "expected_volume": rational(&f.expected_volume),
                "stabilized": f.stabilized,
                "full_volume": f.full_volume,
                "birational": f.birational,
                "base_locus_empty": f.base_locus_empty,
                "agree": f.agree,
            },
        }),
    })
}

fn generic_test(job: &JobSpec, series: &Series, bound: TruncationBound) -> Result<Outcome, CliError> {
    let seeds: Vec<u64> = (0..job.flag_count as u64).map(|i| job.seed + i).collect();
    let d = series.ambient_dim();
    // One worker per flag; results are collected in seed order.
    let reports: Vec<Result<BodyReport<Rational>, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .iter()
            .map(|&seed| scope.spawn(move || checked_body(series, &Flag::random(d, seed), bound)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let reports = reports.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut all_equal = true;
    for r in &reports[1..] {
        all_equal &= r.polytope.equals(&reports[0].polytope)?;
    }
    let bodies: Vec<Value> = seeds
        .iter()
        .zip(&reports)
        .map(|(seed, r)| json!({ "seed": seed, "body": body_report(r) }))
        .collect();
    Ok(Outcome {
        exact: reports.iter().all(BodyReport::is_exact),
        payload: json!({ "bodies": bodies, "all_equal": all_equal }),
    })
}

/// All `σ ∈ ℕ^r`, `1 ≤ r ≤ d`, with `|σ| ≤ max`, in lexicographic order per length.
pub fn sigma_prefixes(d: usize, max: u32) -> Vec<Vec<u32>> {
    fn extend(prefix: &mut Vec<u32>, len: usize, budget: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for v in 0..=budget {
            prefix.push(v);
            extend(prefix, len, budget - v, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for len in 1..=d {
        extend(&mut Vec::new(), len, max, &mut out);
    }
    out
}

fn filtered_dims(job: &JobSpec, series: &Series, bound: TruncationBound) -> Result<Outcome, CliError> {
    let flag = job.flag.build(series.ambient_dim())?;
    let sigmas = sigma_prefixes(series.ambient_dim(), job.sigma_max);
    let mut rows = Vec::new();
    for k in 1..=bound.get() {
        for sigma in &sigmas {
            let dim = filtered_dimension(series, &flag, k, sigma, bound)?;
            rows.push(json!({ "k": k, "sigma": sigma, "dim": dim }));
        }
    }
    Ok(Outcome { exact: true, payload: json!({ "flag": flag_json(&flag), "rows": rows }) })
}

fn fujita(job: &JobSpec, series: &Series, bound: TruncationBound) -> Result<Outcome, CliError> {
    let flag = job.flag.build(series.ambient_dim())?;
    let full = checked_body(series, &flag, bound)?;
    let mut degrees = job.fujita_degrees.clone();
    degrees.sort_unstable();
    degrees.dedup();
    let mut scaled = Vec::new();
    let mut entries = Vec::new();
    let mut exact = full.is_exact();
    for &p in &degrees {
        // V_{k,p} ⊆ S_{kp}: keep the same range of S-degrees.
        let kp = TruncationBound::new((bound.get() / p).max(1))?;
        let v = series.fujita_subseries(p)?;
        let report = checked_body(&v, &flag, kp)?;
        exact &= report.is_exact();
        let body = report.polytope.scale(&(Rational::from_i64(1) / Rational::from_usize(p)))?;
        let inside = body.is_subset_of(&full.polytope)?;
        entries.push(json!({
            "p": p,
            "truncation": kp.get(),
            "exact": report.is_exact(),
            "scaled_body": polytope(&body),
            "inside_full_body": inside,
        }));
        scaled.push((p, body, inside));
    }
    let mut chain = Vec::new();
    for (i, (p, small, _)) in scaled.iter().enumerate() {
        for (q, big, _) in &scaled[i + 1..] {
            if q % p == 0 {
                chain.push(json!({ "p": p, "p_prime": q, "contained": small.is_subset_of(big)? }));
            }
        }
    }
    let consistent = scaled.iter().all(|(_, _, inside)| *inside)
        && chain.iter().all(|c| c["contained"] == Value::Bool(true));
    Ok(Outcome {
        exact,
        payload: json!({
            "full_body": body_report(&full),
            "subseries": entries,
            "chain": chain,
            "consistent": consistent,
        }),
    })
}

fn surface(job: &JobSpec, problem: &crate::schema::SurfaceProblem) -> Result<Outcome, CliError> {
    let body = surface_body(&problem.lattice, &problem.d, &problem.c, &problem.point_multiplicities)?;
    if !body.is_convex() {
        return Err(CliError::Invariant("surface body boundary is not convex".into()));
    }
    svg_if_requested(job, Plot::Surface(&body))?;
    let z = zariski(&problem.lattice, &problem.d)?;
    let pieces = |ls: &[okounkov::surfacezar::Linear<Rational>]| -> Vec<Value> {
        ls.iter().map(|l| json!({ "slope": rational(&l.slope), "intercept": rational(&l.intercept) })).collect()
    };
    let strata: Vec<Value> = classify_boundary(&body)
        .iter()
        .map(|s| {
            let kind = match s.kind {
                StratumKind::Interior => "interior",
                StratumKind::LeftEdge => "left-edge",
                StratumKind::LowerGraph => "lower-graph",
                StratumKind::UpperGraph => "upper-graph",
                StratumKind::RightEdge => "right-edge",
            };
            let valuativity = match s.valuativity {
                Valuativity::Valuative => "valuative",
                Valuativity::NonValuativeForPositiveGenus => "non-valuative-if-positive-genus",
                Valuativity::Unknown => "unknown",
            };
            let points: Vec<Value> = s.endpoints.iter().map(|(t, y)| vector(&[t.clone(), y.clone()])).collect();
            json!({ "kind": kind, "label": s.label, "valuativity": valuativity, "points": points })
        })
        .collect();
    let negative: Vec<Value> =
        z.negative.iter().map(|(i, c)| json!({ "curve": i, "coefficient": rational(c) })).collect();
    Ok(Outcome {
        exact: true,
        payload: json!({
            "nu": rational(&body.nu),
            "mu": rational(&body.mu),
            "breakpoints": vector(&body.breakpoints),
            "alpha": pieces(&body.alpha),
            "beta": pieces(&body.beta),
            "supports": body.supports,
            "area": rational(&body.area()),
            "polygon": polytope(&body.to_polytope()),
            "strata": strata,
            "zariski": { "positive": vector(&z.positive), "negative": negative },
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_prefixes_are_bounded() {
        let s = sigma_prefixes(2, 1);
        assert_eq!(s, vec![vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert!(sigma_prefixes(3, 4).iter().all(|v| v.iter().sum::<u32>() <= 4));
    }
}
