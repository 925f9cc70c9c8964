use crate::classify::{classify, ClassProfile};
use crate::domination::{domination_number, power, DominationError};
use crate::fair::{fair_domination_number_bruteforce, MAX_FAIR_BRUTEFORCE_N};
use crate::graph::{cartesian_product, Graph, GraphError, DEFAULT_PRODUCT_CAP};
use crate::Budget;
use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Domination(#[from] DominationError),
    #[error(
        "proven bound {} fails on pair ({}, {}): \
         product domination number {} is below {}; report: {}",
        .0.name, .0.g_id, .0.h_id, .0.gamma_product, .0.value, .0.report
    )]
    ProvenBoundViolation(Box<ProvenViolation>),
}

/// The full context of a proven-bound failure, which can only mean a defect
/// in the solvers and therefore aborts whatever run produced it.
#[derive(Debug)]
pub struct ProvenViolation {
    pub name: String,
    pub g_id: String,
    pub h_id: String,
    pub gamma_product: usize,
    pub value: String,
    pub report: String,
}

fn ratio(n: usize) -> Rational64 {
    Rational64::from_integer(n as i64)
}

/// Exact text form, "8/3" or plain "4" for integers.
pub fn rational_string(r: &Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Four-place decimal rendering for report readers. Verdicts never use this.
pub fn rational_approx(r: &Rational64) -> String {
    format!("{:.4}", *r.numer() as f64 / *r.denom() as f64)
}

fn ser_rational<S: serde::Serializer>(v: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(v))
}

fn ser_opt_rational<S: serde::Serializer>(
    v: &Option<Rational64>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&rational_string(r)),
        None => s.serialize_none(),
    }
}

/// One lower bound on the product domination number. `proven` rows are
/// theorems and a failed one is a solver bug; the conjectured row and any
/// user-asserted row stay informational. `value` is `None` when the row does
/// not apply, or for the one bound whose value is irrational.
#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    pub name: &'static str,
    #[serde(serialize_with = "ser_opt_rational")]
    pub value: Option<Rational64>,
    pub approx: Option<String>,
    pub applicable: bool,
    pub satisfied: Option<bool>,
    pub proven: bool,
}

impl BoundRow {
    fn rational(name: &'static str, value: Rational64, proven: bool) -> BoundRow {
        BoundRow {
            name,
            value: Some(value),
            approx: Some(rational_approx(&value)),
            applicable: true,
            satisfied: None,
            proven,
        }
    }

    fn inapplicable(name: &'static str, proven: bool) -> BoundRow {
        BoundRow {
            name,
            value: None,
            approx: None,
            applicable: false,
            satisfied: None,
            proven,
        }
    }

    fn evaluate(&mut self, gamma_product: usize) {
        if self.applicable {
            if let Some(v) = self.value {
                self.satisfied = Some(ratio(gamma_product) >= v);
            }
        }
    }
}

/// Half the domination product plus half the smaller factor. Holds for every
/// pair of graphs.
pub fn suen_tarr_bound(gamma_g: usize, gamma_h: usize) -> Rational64 {
    Rational64::new((gamma_g * gamma_h + gamma_g.min(gamma_h)) as i64, 2)
}

/// The power coefficient π/(2π−1) applied to the domination product. Holds
/// for every pair of graphs; π = 1 recovers the full product.
pub fn power_bound(pi_g: usize, gamma_g: usize, gamma_h: usize) -> Rational64 {
    Rational64::new(pi_g as i64, (2 * pi_g - 1) as i64) * ratio(gamma_g * gamma_h)
}

/// One factor per grouped distance level: (⌊d/3⌋ + 1)·γ(H).
pub fn diameter_bound(diam_g: usize, gamma_h: usize) -> Rational64 {
    ratio((diam_g / 3 + 1) * gamma_h)
}

/// Bound rows driven by the induced-subgraph profile of G. Values use the
/// smallest forbidden order available since the coefficients shrink as the
/// order grows.
pub fn class_bounds(profile: &ClassProfile, gamma_g: usize, gamma_h: usize) -> Vec<BoundRow> {
    let gg = gamma_g * gamma_h;
    let p5_free = profile.is_path_free(5) == Some(true);
    let mut rows = Vec::with_capacity(5);

    // triangle-free plus K_{1,r}-free gives r/(2r-1) of the product
    let star = if profile.triangle_free {
        profile.smallest_free_star()
    } else {
        None
    };
    rows.push(match star {
        Some(r) => BoundRow::rational(
            "triangle_star",
            Rational64::new(r as i64, (2 * r - 1) as i64) * ratio(gg),
            true,
        ),
        None => BoundRow::inapplicable("triangle_star", true),
    });

    // K_r-free plus P5-free gives (r-1)/(2r-3) of the product; only r >= 4
    // is used here, graphs free of smaller cliques have gamma <= 3 and the
    // full-strength row covers them
    let clique = if p5_free {
        profile.smallest_free_clique().map(|r| r.max(4))
    } else {
        None
    };
    rows.push(match clique {
        Some(r) => BoundRow::rational(
            "clique_p5",
            Rational64::new((r - 1) as i64, (2 * r - 3) as i64) * ratio(gg),
            true,
        ),
        None => BoundRow::inapplicable("clique_p5", true),
    });

    // classes where the full product bound is a theorem
    let full = [
        (
            "claw_p6",
            profile.claw_free && profile.is_path_free(6) == Some(true),
        ),
        ("k4_p5", profile.is_k_free(4) == Some(true) && p5_free),
        ("cograph", profile.is_path_free(4) == Some(true)),
    ];
    for (name, holds) in full {
        rows.push(if holds {
            BoundRow::rational(name, ratio(gg), true)
        } else {
            BoundRow::inapplicable(name, true)
        });
    }
    rows
}

fn fair_row(g: &Graph, gamma_h: usize, budget: &Budget) -> BoundRow {
    if g.n() <= MAX_FAIR_BRUTEFORCE_N {
        if let Ok(k) = fair_domination_number_bruteforce(g, budget) {
            return BoundRow::rational("fair", ratio(k * gamma_h), true);
        }
    }
    BoundRow::inapplicable("fair", true)
}

/// The user-asserted row (γ(G) − √γ(G))·γ(H). The square root is irrational
/// in general, so the verdict compares by squaring the deficit instead of
/// rounding anything. Informational because the class membership it needs is
/// taken on the caller's word.
fn contractor_krop_row(gamma_g: usize, gamma_h: usize, gamma_product: usize) -> BoundRow {
    let deficit = ratio(gamma_g) - ratio(gamma_product) / ratio(gamma_h);
    let satisfied = deficit <= ratio(0) || ratio(gamma_g) >= deficit * deficit;
    let gf = gamma_g as f64;
    let approx = (gf - gf.sqrt()) * gamma_h as f64;
    BoundRow {
        name: "contractor_krop",
        value: None,
        approx: Some(format!("{approx:.4}")),
        applicable: true,
        satisfied: Some(satisfied),
        proven: false,
    }
}

#[derive(Debug, Clone)]
pub struct CheckOptions {
    pub budget: Budget,
    pub product_cap: usize,
    pub r_max: usize,
    /// Adds the Contractor–Krop row; the caller asserts the class membership.
    pub assume_contractor_krop: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            budget: Budget::default(),
            product_cap: DEFAULT_PRODUCT_CAP,
            r_max: 6,
            assume_contractor_krop: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub g_id: String,
    pub h_id: String,
    pub gamma_g: usize,
    pub gamma_h: usize,
    pub gamma_product: usize,
    pub pi_g: usize,
    pub diam_g: usize,
    #[serde(serialize_with = "ser_rational")]
    pub vizing_ratio: Rational64,
    pub vizing_ratio_approx: String,
    pub bounds: Vec<BoundRow>,
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl BoundReport {
    pub const CSV_HEADER: &'static str =
        "g_id,h_id,gamma_g,gamma_h,gamma_product,pi_g,diam_g,ratio,worst_bound_margin";

    /// Smallest slack over the applicable proven rows, i.e. how close the
    /// nearest theorem came to being tight.
    pub fn worst_bound_margin(&self) -> Option<Rational64> {
        self.bounds
            .iter()
            .filter(|r| r.proven && r.applicable)
            .filter_map(|r| r.value.map(|v| ratio(self.gamma_product) - v))
            .min()
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_csv_row(&self) -> String {
        let margin = self
            .worst_bound_margin()
            .map_or_else(String::new, |m| rational_approx(&m));
        format!(
            "{},{},{},{},{},{},{},{},{}",
            csv_field(&self.g_id),
            csv_field(&self.h_id),
            self.gamma_g,
            self.gamma_h,
            self.gamma_product,
            self.pi_g,
            self.diam_g,
            rational_approx(&self.vizing_ratio),
            margin
        )
    }
}

/// Computes the exact invariants of a pair and its product and fills every
/// bound row. A proven row that fails is returned as a hard error carrying
/// the full report, since it can only mean a defect in the solvers.
pub fn check_pair(
    g: &Graph,
    h: &Graph,
    g_id: &str,
    h_id: &str,
    opts: &CheckOptions,
) -> Result<BoundReport, BoundsError> {
    let product = cartesian_product(g, h, opts.product_cap)?;
    let gamma_g = domination_number(g, &opts.budget)?.gamma;
    let gamma_h = domination_number(h, &opts.budget)?.gamma;
    let gamma_product = domination_number(&product, &opts.budget)?.gamma;
    let pi_g = power(g, &opts.budget)?;
    let diam_g = g.diameter()?;
    let profile = classify(g, opts.r_max);
    let gg = gamma_g * gamma_h;

    let mut rows = vec![
        BoundRow::rational("vizing", ratio(gg), false),
        BoundRow::rational("suen_tarr", suen_tarr_bound(gamma_g, gamma_h), true),
        BoundRow::rational("power", power_bound(pi_g, gamma_g, gamma_h), true),
        BoundRow::rational("diameter", diameter_bound(diam_g, gamma_h), true),
        fair_row(g, gamma_h, &opts.budget),
    ];
    rows.extend(class_bounds(&profile, gamma_g, gamma_h));
    rows.push(if gamma_g <= 3 {
        BoundRow::rational("gamma_le3", ratio(gg), true)
    } else {
        BoundRow::inapplicable("gamma_le3", true)
    });
    // the claw-free two-thirds coefficient follows from the power row
    // whenever pi is at most 2, so it applies exactly then
    rows.push(if profile.claw_free && pi_g <= 2 {
        BoundRow::rational("claw_two_thirds", Rational64::new(2, 3) * ratio(gg), true)
    } else {
        BoundRow::inapplicable("claw_two_thirds", true)
    });
    if opts.assume_contractor_krop {
        rows.push(contractor_krop_row(gamma_g, gamma_h, gamma_product));
    }
    for row in &mut rows {
        row.evaluate(gamma_product);
    }

    let report = BoundReport {
        g_id: g_id.to_string(),
        h_id: h_id.to_string(),
        gamma_g,
        gamma_h,
        gamma_product,
        pi_g,
        diam_g,
        vizing_ratio: ratio(gamma_product) / ratio(gg),
        vizing_ratio_approx: rational_approx(&(ratio(gamma_product) / ratio(gg))),
        bounds: rows,
    };
    if let Some(bad) = report
        .bounds
        .iter()
        .find(|r| r.proven && r.applicable && r.satisfied == Some(false))
    {
        return Err(BoundsError::ProvenBoundViolation(Box::new(ProvenViolation {
            name: bad.name.to_string(),
            g_id: report.g_id.clone(),
            h_id: report.h_id.clone(),
            gamma_product,
            value: bad.value.as_ref().map_or_else(String::new, rational_string),
            report: report.to_json_line(),
        })));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path};

    fn row<'a>(rep: &'a BoundReport, name: &str) -> &'a BoundRow {
        rep.bounds
            .iter()
            .find(|r| r.name == name)
            .unwrap_or_else(|| panic!("no row {name}"))
    }

    #[test]
    fn suen_tarr_values() {
        assert_eq!(suen_tarr_bound(2, 2), ratio(3));
        assert_eq!(suen_tarr_bound(1, 1), ratio(1));
        assert_eq!(suen_tarr_bound(3, 2), ratio(4));
        assert_eq!(suen_tarr_bound(2, 3), ratio(4));
    }

    #[test]
    fn power_values() {
        assert_eq!(power_bound(1, 2, 3), ratio(6));
        assert_eq!(power_bound(2, 2, 2), Rational64::new(8, 3));
        assert_eq!(power_bound(3, 3, 3), Rational64::new(27, 5));
        for pi in 1..6 {
            assert!(power_bound(pi, 3, 4) >= Rational64::new(12, 2));
        }
    }

    #[test]
    fn diameter_values() {
        assert_eq!(diameter_bound(6, 2), ratio(6));
        assert_eq!(diameter_bound(1, 3), ratio(3));
        assert_eq!(diameter_bound(4, 1), ratio(2));
        assert_eq!(diameter_bound(0, 5), ratio(5));
    }

    #[test]
    fn rendering() {
        assert_eq!(rational_string(&Rational64::new(8, 3)), "8/3");
        assert_eq!(rational_string(&ratio(4)), "4");
        assert_eq!(rational_approx(&Rational64::new(8, 3)), "2.6667");
        assert_eq!(rational_approx(&ratio(4)), "4.0000");
    }

    #[test]
    fn class_rows_for_c5() {
        let profile = classify(&cycle(5).unwrap(), 6);
        let rows = class_bounds(&profile, 2, 2);
        let by_name = |n: &str| rows.iter().find(|r| r.name == n).unwrap();
        // triangle-free and no K_{1,3}, so r = 3 and the value is 3/5 of 4
        let ts = by_name("triangle_star");
        assert!(ts.applicable);
        assert_eq!(ts.value, Some(Rational64::new(12, 5)));
        assert_eq!(ts.approx.as_deref(), Some("2.4000"));
        // triangle-free pushes the clique row up to r = 4
        let cp = by_name("clique_p5");
        assert!(cp.applicable);
        assert_eq!(cp.value, Some(Rational64::new(12, 5)));
        assert!(by_name("claw_p6").applicable);
        assert!(by_name("k4_p5").applicable);
        assert!(!by_name("cograph").applicable);
    }

    #[test]
    fn class_rows_with_triangle() {
        let profile = classify(&complete(3).unwrap(), 6);
        let rows = class_bounds(&profile, 1, 1);
        let ts = rows.iter().find(|r| r.name == "triangle_star").unwrap();
        assert!(!ts.applicable);
        assert_eq!(ts.value, None);
    }

    #[test]
    fn torus_pair_report() {
        let c4 = cycle(4).unwrap();
        let rep = check_pair(&c4, &c4, "C4", "C4", &CheckOptions::default()).unwrap();
        assert_eq!(rep.gamma_g, 2);
        assert_eq!(rep.gamma_product, 4);
        assert_eq!(rep.pi_g, 2);
        assert_eq!(rep.diam_g, 2);
        assert_eq!(rep.vizing_ratio, ratio(1));
        assert_eq!(row(&rep, "vizing").value, Some(ratio(4)));
        assert!(!row(&rep, "vizing").proven);
        assert_eq!(row(&rep, "suen_tarr").value, Some(ratio(3)));
        assert_eq!(row(&rep, "power").value, Some(Rational64::new(8, 3)));
        assert_eq!(row(&rep, "diameter").value, Some(ratio(2)));
        assert_eq!(row(&rep, "fair").value, Some(ratio(4)));
        assert_eq!(row(&rep, "triangle_star").value, Some(Rational64::new(12, 5)));
        assert_eq!(row(&rep, "claw_two_thirds").value, Some(Rational64::new(8, 3)));
        assert_eq!(row(&rep, "gamma_le3").value, Some(ratio(4)));
        for r in &rep.bounds {
            if r.applicable {
                assert_eq!(r.satisfied, Some(true), "row {}", r.name);
            }
        }
        assert_eq!(rep.worst_bound_margin(), Some(ratio(0)));
    }

    #[test]
    fn unit_factor_report() {
        let rep = check_pair(
            &complete(1).unwrap(),
            &path(4).unwrap(),
            "K1",
            "P4",
            &CheckOptions::default(),
        )
        .unwrap();
        assert_eq!(rep.gamma_product, 2);
        assert_eq!(rep.vizing_ratio, ratio(1));
        assert_eq!(row(&rep, "power").value, Some(ratio(2)));
        assert_eq!(row(&rep, "diameter").value, Some(ratio(2)));
        assert_eq!(row(&rep, "fair").value, Some(ratio(2)));
        assert_eq!(row(&rep, "suen_tarr").value, Some(Rational64::new(3, 2)));
    }

    #[test]
    fn grid_pair_full_row() {
        let p4 = path(4).unwrap();
        let rep = check_pair(&p4, &p4, "P4", "P4", &CheckOptions::default()).unwrap();
        assert_eq!(rep.gamma_product, 4);
        let cp = row(&rep, "claw_p6");
        assert!(cp.applicable);
        assert_eq!(cp.value, Some(ratio(4)));
        assert_eq!(cp.satisfied, Some(true));
    }

    #[test]
    fn squared_comparison() {
        // gamma 2 against product 1 of one copy holds since 2 - sqrt(2) < 1
        let r = contractor_krop_row(2, 1, 1);
        assert_eq!(r.satisfied, Some(true));
        assert_eq!(r.value, None);
        // gamma 4 needs product at least 2, and 2 hits it exactly
        assert_eq!(contractor_krop_row(4, 1, 1).satisfied, Some(false));
        let exact = contractor_krop_row(4, 1, 2);
        assert_eq!(exact.satisfied, Some(true));
        assert_eq!(exact.approx.as_deref(), Some("2.0000"));
    }

    #[test]
    fn asserted_row_in_report() {
        let opts = CheckOptions {
            assume_contractor_krop: true,
            ..CheckOptions::default()
        };
        let rep = check_pair(
            &path(10).unwrap(),
            &complete(1).unwrap(),
            "P10",
            "K1",
            &opts,
        )
        .unwrap();
        assert_eq!(rep.gamma_g, 4);
        let ck = row(&rep, "contractor_krop");
        assert!(!ck.proven);
        assert_eq!(ck.satisfied, Some(true));
        assert_eq!(ck.approx.as_deref(), Some("2.0000"));
        let plain = check_pair(
            &path(10).unwrap(),
            &complete(1).unwrap(),
            "P10",
            "K1",
            &CheckOptions::default(),
        )
        .unwrap();
        assert!(plain.bounds.iter().all(|r| r.name != "contractor_krop"));
    }

    #[test]
    fn report_serialization() {
        let c4 = cycle(4).unwrap();
        let rep = check_pair(&c4, &c4, "C4", "C4", &CheckOptions::default()).unwrap();
        let line = rep.to_json_line();
        assert!(line.contains("\"vizing_ratio\":\"1\""));
        assert!(line.contains("\"value\":\"8/3\""));
        assert!(!line.contains('\n'));
        assert_eq!(
            rep.to_csv_row(),
            "C4,C4,2,2,4,2,2,1.0000,0.0000"
        );
        assert_eq!(csv_field("complete_bipartite:2,3"), "\"complete_bipartite:2,3\"");
    }

    #[test]
    fn starved_solver_errors() {
        let opts = CheckOptions {
            budget: Budget {
                max_nodes: 0,
                ..Budget::default()
            },
            ..CheckOptions::default()
        };
        let c4 = cycle(4).unwrap();
        assert!(matches!(
            check_pair(&c4, &c4, "a", "b", &opts),
            Err(BoundsError::Domination(
                DominationError::BudgetExhausted { .. }
            ))
        ));
    }
}
