//! Machine-readable report types and their human-readable rendering.
//!
//! JSON fields carry numbers as strings: exact rationals as "p/q" and
//! reals in shortest round-trip form, so emitted reports re-serialize
//! byte-identically after parsing.

use serde::{Deserialize, Serialize};

use crate::bounds::BoundReport;
use crate::error::Error;
use crate::everify::{Corruption, Derivation, DerivationKind};
use crate::graph::Graph;
use crate::quantum::{chsh_realization, kcbs_adjacent_pairs, kcbs_realization};
use crate::theta::ThetaResult;

pub fn real(x: f64) -> String {
    format!("{x:?}")
}

pub fn fixed7(x: f64) -> String {
    format!("{x:.7}")
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct BoundsJson {
    pub scenario: String,
    pub events: Vec<String>,
    pub deterministic: usize,
    pub independent_set: usize,
    pub witness: Vec<String>,
    pub kolmogorov: String,
    pub clique_lp: String,
    pub theta: String,
    pub theta_gap: String,
    pub theta_iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_bound: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
}

impl BoundsJson {
    pub fn from_report(r: &BoundReport) -> BoundsJson {
        BoundsJson {
            scenario: r.scenario.clone(),
            events: r.event_labels.clone(),
            deterministic: r.deterministic,
            independent_set: r.independent_set,
            witness: r
                .deterministic_witness
                .outcomes
                .iter()
                .map(|(n, s)| format!("{n}:{s}"))
                .collect(),
            kolmogorov: r.kolmogorov.to_string(),
            clique_lp: r.clique_lp.to_string(),
            theta: real(r.theta.value),
            theta_gap: real(r.theta.gap),
            theta_iterations: r.theta.iterations,
            e_bound: r.e_bound.map(real),
            kappa: r.kappa.map(real),
            beta: r.beta.map(real),
        }
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("scenario: {}\n", self.scenario));
        out.push_str(&format!("events ({}):\n", self.events.len()));
        for e in &self.events {
            out.push_str(&format!("  {e}\n"));
        }
        out.push_str(&format!(
            "deterministic      {}\n",
            self.deterministic
        ));
        out.push_str(&format!(
            "independent set    {}\n",
            self.independent_set
        ));
        out.push_str(&format!("kolmogorov LP      {}\n", self.kolmogorov));
        out.push_str(&format!("clique LP          {}\n", self.clique_lp));
        let theta: f64 = self.theta.parse().unwrap_or(f64::NAN);
        let gap: f64 = self.theta_gap.parse().unwrap_or(f64::NAN);
        out.push_str(&format!(
            "theta              {} (gap {:.1e}, {} iterations)\n",
            fixed7(theta),
            gap,
            self.theta_iterations
        ));
        if let Some(e) = &self.e_bound {
            let v: f64 = e.parse().unwrap_or(f64::NAN);
            out.push_str(&format!("e-principle bound  {}\n", fixed7(v)));
        }
        if let Some(k) = &self.kappa {
            let v: f64 = k.parse().unwrap_or(f64::NAN);
            out.push_str(&format!("kappa limit        {}\n", fixed7(v)));
        }
        if let Some(b) = &self.beta {
            let v: f64 = b.parse().unwrap_or(f64::NAN);
            out.push_str(&format!("beta limit         {}\n", fixed7(v)));
        }
        out
    }
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct SetJson {
    pub label: String,
    pub events: Vec<String>,
    pub pairs_checked: usize,
    pub certified: bool,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct VerifyJson {
    pub kind: String,
    pub sets: Vec<SetJson>,
    pub inequalities_summed: i64,
    pub product_terms: usize,
    pub identity: String,
    pub identity_verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization_constant: Option<i64>,
    pub assumptions: Vec<String>,
    pub bound: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_lower: Option<String>,
}

pub fn verify_derivation(kind: DerivationKind, corruption: Option<&Corruption>) -> Result<VerifyJson, Error> {
    let mut d = match kind {
        DerivationKind::Kcbs => Derivation::kcbs()?,
        DerivationKind::Chsh => Derivation::chsh_with(corruption)?,
    };
    d.verify_identity()?;
    let bound = d.solve_symmetric_bound()?;
    let (kind_name, identity, assumptions) = match kind {
        DerivationKind::Kcbs => (
            "kcbs",
            "sum of 5 inequalities = S^A * S^B <= 5".to_string(),
            vec![
                "the two experiment copies are independent (probabilities multiply)".to_string(),
                "both copies attain the same maximum S".to_string(),
            ],
        ),
        DerivationKind::Chsh => (
            "chsh",
            "sum of 16 inequalities = S^A S^B + (4-S^A)(4-S^B) + 4 <= 16".to_string(),
            vec![
                "the two experiment copies are independent (probabilities multiply)".to_string(),
                "both copies attain the same maximum S".to_string(),
                "agreement observables C11, C33, C13, C31 exist and are co-measurable as declared".to_string(),
            ],
        ),
    };
    Ok(VerifyJson {
        kind: kind_name.to_string(),
        sets: d
            .sets
            .iter()
            .map(|s| SetJson {
                label: s.label.clone(),
                events: s.events.iter().map(|e| e.to_string()).collect(),
                pairs_checked: s.pair_count(),
                certified: s.is_certified(),
            })
            .collect(),
        inequalities_summed: d.bound,
        product_terms: d.lhs.term_count(),
        identity,
        identity_verified: d.identity_verified(),
        normalization_constant: (d.c_constant != 0).then_some(d.c_constant),
        assumptions,
        bound: real(bound.upper),
        bound_lower: (kind == DerivationKind::Chsh).then(|| real(bound.lower)),
    })
}

pub fn verify_specker() -> Result<VerifyJson, Error> {
    let ineq = crate::everify::specker_inequality()?;
    let (scn, events) = crate::scenario::builtin("specker").expect("builtin");
    let g = crate::graph::build_exclusivity_graph(&events, &scn)?;
    let kol = crate::lp::kolmogorov_max(&g)?;
    let clq = crate::lp::clique_lp_max(&g)?;
    Ok(VerifyJson {
        kind: "specker".to_string(),
        sets: vec![SetJson {
            label: ineq.label.clone(),
            events: ineq.events.iter().map(|e| e.to_string()).collect(),
            pairs_checked: ineq.pair_count(),
            certified: ineq.is_certified(),
        }],
        inequalities_summed: 1,
        product_terms: ineq.lhs.term_count(),
        identity: format!(
            "pairwise-only maximum {kol} vs joint-exclusivity maximum {clq}"
        ),
        identity_verified: kol == crate::lp::rat(3, 2) && clq == crate::lp::rat(1, 1),
        normalization_constant: None,
        assumptions: vec!["pairwise exclusive events are jointly exclusive".to_string()],
        bound: clq.to_string(),
        bound_lower: None,
    })
}

impl VerifyJson {
    pub fn transcript(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("verifying: {}\n", self.kind));
        for s in &self.sets {
            out.push_str(&format!(
                "{}: {} events, {} pairs checked, {}\n",
                s.label,
                s.events.len(),
                s.pairs_checked,
                if s.certified { "certified pairwise exclusive" } else { "NOT certified" }
            ));
            for e in &s.events {
                out.push_str(&format!("  {e}\n"));
            }
        }
        out.push_str(&format!(
            "summed {} certified inequalities: {} distinct terms\n",
            self.inequalities_summed, self.product_terms
        ));
        out.push_str(&format!(
            "identity: {} ... {}\n",
            self.identity,
            if self.identity_verified { "verified" } else { "FAILED" }
        ));
        if let Some(c) = self.normalization_constant {
            out.push_str(&format!(
                "normalization groups contribute the constant {c}\n"
            ));
        }
        for a in &self.assumptions {
            out.push_str(&format!("assumption: {a}\n"));
        }
        let b: f64 = self.bound.parse().unwrap_or(f64::NAN);
        out.push_str(&format!("bound: {}\n", fixed7(b)));
        if let Some(l) = &self.bound_lower {
            let l: f64 = l.parse().unwrap_or(f64::NAN);
            out.push_str(&format!("other boundary of the feasible interval: {}\n", fixed7(l)));
        }
        out
    }
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct ThetaJson {
    pub vertices: usize,
    pub edges: usize,
    pub value: String,
    pub dual_value: String,
    pub gap: String,
    pub iterations: usize,
}

impl ThetaJson {
    pub fn new(g: &Graph, r: &ThetaResult) -> ThetaJson {
        ThetaJson {
            vertices: g.len(),
            edges: g.edge_count(),
            value: real(r.value),
            dual_value: real(r.dual_value),
            gap: real(r.gap),
            iterations: r.iterations,
        }
    }

    pub fn table(&self) -> String {
        let v: f64 = self.value.parse().unwrap_or(f64::NAN);
        let gap: f64 = self.gap.parse().unwrap_or(f64::NAN);
        format!(
            "graph: {} vertices, {} edges\ntheta {} (gap {:.1e}, {} iterations)\n",
            self.vertices,
            self.edges,
            fixed7(v),
            gap,
            self.iterations
        )
    }
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct RealizeJson {
    pub kind: String,
    pub s_value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_prime_value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlators: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angles_degrees: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<Vec<String>>>,
    pub max_orthogonality_residual: String,
}

pub fn realize(kind: &str) -> Result<RealizeJson, Error> {
    match kind {
        "kcbs" => {
            let r = kcbs_realization();
            Ok(RealizeJson {
                kind: "kcbs".to_string(),
                s_value: real(r.s_value),
                s_prime_value: Some(real(r.s_prime_value)),
                kappa: Some(real(r.kappa)),
                beta: None,
                correlators: None,
                angles_degrees: None,
                vectors: Some(
                    std::iter::once(&r.model.state)
                        .chain(r.model.projectors.iter())
                        .map(|v| v.iter().map(|&x| real(x)).collect())
                        .collect(),
                ),
                max_orthogonality_residual: real(
                    r.model.max_orthogonality_residual(&kcbs_adjacent_pairs()),
                ),
            })
        }
        "chsh" => {
            let r = chsh_realization()?;
            Ok(RealizeJson {
                kind: "chsh".to_string(),
                s_value: real(r.s_value),
                s_prime_value: None,
                kappa: None,
                beta: Some(real(r.beta)),
                correlators: Some(r.correlators.iter().map(|&c| real(c)).collect()),
                angles_degrees: Some(
                    r.angles
                        .iter()
                        .map(|a| real(a.to_degrees()))
                        .collect(),
                ),
                vectors: None,
                max_orthogonality_residual: real(0.0),
            })
        }
        other => Err(Error::UnknownScenario(other.to_string())),
    }
}

impl RealizeJson {
    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("realization: {}\n", self.kind));
        let s: f64 = self.s_value.parse().unwrap_or(f64::NAN);
        out.push_str(&format!("S value    {}\n", fixed7(s)));
        if let Some(sp) = &self.s_prime_value {
            let sp: f64 = sp.parse().unwrap_or(f64::NAN);
            out.push_str(&format!("S' value   {}\n", fixed7(sp)));
        }
        if let Some(k) = &self.kappa {
            let k: f64 = k.parse().unwrap_or(f64::NAN);
            out.push_str(&format!("kappa      {}\n", fixed7(k)));
        }
        if let Some(b) = &self.beta {
            let b: f64 = b.parse().unwrap_or(f64::NAN);
            out.push_str(&format!("beta       {}\n", fixed7(b)));
        }
        if let Some(cs) = &self.correlators {
            let cs: Vec<String> = cs
                .iter()
                .map(|c| fixed7(c.parse().unwrap_or(f64::NAN)))
                .collect();
            out.push_str(&format!("correlators {}\n", cs.join(" ")));
        }
        if let Some(angles) = &self.angles_degrees {
            let a: Vec<String> = angles
                .iter()
                .map(|c| format!("{:.1}", c.parse::<f64>().unwrap_or(f64::NAN)))
                .collect();
            out.push_str(&format!("angles (deg) {}\n", a.join(" ")));
        }
        if let Some(vectors) = &self.vectors {
            out.push_str("vectors (state first):\n");
            for v in vectors {
                let comps: Vec<String> = v
                    .iter()
                    .map(|c| fixed7(c.parse().unwrap_or(f64::NAN)))
                    .collect();
                out.push_str(&format!("  [{}]\n", comps.join(", ")));
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct CheckJson {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct ReportJson {
    pub checks: Vec<CheckJson>,
    pub all_pass: bool,
}

impl ReportJson {
    pub fn table(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "[{}] {}: expected {}, got {}\n",
                if c.pass { "pass" } else { "FAIL" },
                c.name,
                c.expected,
                c.actual
            ));
        }
        out.push_str(if self.all_pass {
            "all checks pass\n"
        } else {
            "SOME CHECKS FAILED\n"
        });
        out
    }
}

/// Recomputes every headline number with a pass/fail verdict.
pub fn full_report(tol: f64) -> Result<ReportJson, Error> {
    let mut checks = Vec::new();
    let mut check = |name: &str, expected: String, actual: String, pass: bool| {
        checks.push(CheckJson {
            name: name.to_string(),
            expected,
            actual,
            pass,
        });
    };

    let (scn, events) = crate::scenario::builtin("specker").expect("builtin");
    let g = crate::graph::build_exclusivity_graph(&events, &scn)?;
    let kol = crate::lp::kolmogorov_max(&g)?;
    check(
        "triangle pairwise-only maximum",
        "3/2".into(),
        kol.to_string(),
        kol == crate::lp::rat(3, 2),
    );
    let clq = crate::lp::clique_lp_max(&g)?;
    check(
        "triangle joint-exclusivity maximum",
        "1".into(),
        clq.to_string(),
        clq == crate::lp::rat(1, 1),
    );

    for (name, expected) in [("kcbs", 2usize), ("chsh", 3usize)] {
        let (scn, events) = crate::scenario::builtin(name).expect("builtin");
        let (det, _) = crate::classical::deterministic_max(&events, &scn)?;
        let g = crate::graph::build_exclusivity_graph(&events, &scn)?;
        let (alpha, _) = crate::graph::max_independent_set(&g);
        check(
            &format!("{name} deterministic maximum"),
            expected.to_string(),
            det.to_string(),
            det == expected && alpha == expected,
        );
    }

    let sqrt5 = 5f64.sqrt();
    let tsirelson = 2.0 + 2f64.sqrt();
    let t5 = crate::theta::lovasz_theta(&crate::graph::cycle(5), tol)?;
    check(
        "pentagon theta",
        fixed7(sqrt5),
        fixed7(t5.value),
        (t5.value - sqrt5).abs() <= 1e-6 && t5.gap <= 1e-6,
    );
    let t8 = crate::theta::lovasz_theta(&crate::graph::circulant(8, &[1, 4]), tol)?;
    check(
        "chsh graph theta",
        fixed7(tsirelson),
        fixed7(t8.value),
        (t8.value - tsirelson).abs() <= 1e-6 && t8.gap <= 1e-6,
    );

    let kcbs = verify_derivation(DerivationKind::Kcbs, None)?;
    let kb: f64 = kcbs.bound.parse().unwrap_or(f64::NAN);
    check(
        "pentagon twin derivation bound",
        fixed7(sqrt5),
        fixed7(kb),
        kcbs.identity_verified && (kb - sqrt5).abs() <= 1e-12,
    );
    let chsh = verify_derivation(DerivationKind::Chsh, None)?;
    let cb: f64 = chsh.bound.parse().unwrap_or(f64::NAN);
    check(
        "chsh nine-event derivation bound",
        fixed7(tsirelson),
        fixed7(cb),
        chsh.identity_verified && (cb - tsirelson).abs() <= 1e-12,
    );

    let kappa = crate::classical::kappa_from_s(sqrt5, sqrt5);
    check(
        "kappa limit",
        "3.9442719".into(),
        fixed7(kappa),
        (kappa - (4.0 * sqrt5 - 5.0)).abs() <= 1e-9,
    );
    let beta = crate::classical::beta_from_s(tsirelson);
    check(
        "beta limit",
        "2.8284271".into(),
        fixed7(beta),
        (beta - 2.0 * 2f64.sqrt()).abs() <= 1e-9,
    );

    let kr = kcbs_realization();
    check(
        "pentagon realization S",
        fixed7(sqrt5),
        fixed7(kr.s_value),
        (kr.s_value - sqrt5).abs() <= 1e-9
            && kr.model.max_orthogonality_residual(&kcbs_adjacent_pairs()) <= 1e-10,
    );
    let cr = chsh_realization()?;
    check(
        "chsh realization beta",
        fixed7(2.0 * 2f64.sqrt()),
        fixed7(cr.beta),
        (cr.beta - 2.0 * 2f64.sqrt()).abs() <= 1e-12,
    );

    for n in [5usize, 7, 9, 11] {
        let analytic = crate::theta::odd_cycle_theta(n)?;
        let solved = crate::theta::lovasz_theta(&crate::graph::cycle(n), tol)?;
        check(
            &format!("odd cycle {n} theta vs closed form"),
            fixed7(analytic),
            fixed7(solved.value),
            (solved.value - analytic).abs() <= 1e-6,
        );
    }

    let corruption = Corruption {
        set: 0,
        event: 0,
        observable: "A1".to_string(),
    };
    let negative = verify_derivation(DerivationKind::Chsh, Some(&corruption));
    check(
        "corrupted chsh set fails certification",
        "certification failure".into(),
        match &negative {
            Err(Error::CertificationFailed { .. }) => "certification failure".into(),
            Err(e) => format!("{e}"),
            Ok(_) => "verified (unexpected)".into(),
        },
        matches!(negative, Err(Error::CertificationFailed { .. })),
    );

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(ReportJson { checks, all_pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trips_byte_identically() {
        let j = verify_specker().unwrap();
        let s = serde_json::to_string_pretty(&j).unwrap();
        let back: VerifyJson = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), s);
    }

    #[test]
    fn realize_rejects_unknown_kind() {
        assert!(realize("specker").is_err());
    }
}
