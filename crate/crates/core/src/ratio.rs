//! Consecutive ratios A(n,k,l,q) / A(n,k,l+1,q) of the hull spectrum.
//!
//! The closed-form coefficient `alpha` satisfies
//! `A_l = alpha * (q^(l+1) - 1) * A_(l+1)`, and `mu` is the floor of the
//! ratio computed from the counts themselves. Agreement between the two is
//! the check that neither was mistranscribed.
//!
//! Everything here assumes `k <= n/2` and `l < k`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::census::{condition_star, eta_half, sendrier_count, ParityCase};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::qcomb::{ipow, q_power, Count, Ratio};

/// The case of the alpha tables that applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Branch {
    pub q_even: bool,
    pub case: ParityCase,
    /// eta((-1)^(n/2)) for odd q and even n, otherwise absent.
    pub eta: Option<i8>,
}

impl Branch {
    pub fn label(&self) -> String {
        let field = if self.q_even { "q even" } else { "q odd" };
        match self.eta {
            Some(e) => format!("{field}, {}, eta={e:+}", self.case.label()),
            None => format!("{field}, {}", self.case.label()),
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

fn check_domain(n: u32, k: u32, l: u32, q: u32) -> Result<&'static Field> {
    let f = Field::of_order(q)?;
    if k == 0 || 2 * k > n {
        return Err(Error::domain(format!(
            "ratios need 1 <= k <= n/2, got n={n}, k={k}"
        )));
    }
    if l >= k {
        return Err(Error::domain(format!(
            "ratios need l < k, got k={k}, l={l}"
        )));
    }
    if condition_star(n, q)?.holds && l + 1 == k && 2 * k == n {
        return Err(Error::DegenerateRatio { n, k, l, q });
    }
    Ok(f)
}

/// The coefficient alpha(n, k, l, q) and the table case it came from.
pub fn alpha_with_branch(n: u32, k: u32, l: u32, q: u32) -> Result<(Ratio, Branch)> {
    let f = check_domain(n, k, l, q)?;
    let case = ParityCase::of(n, k - l);
    let eta = (!f.is_even() && n.is_multiple_of(2)).then(|| eta_half(f, n));
    let branch = Branch {
        q_even: f.is_even(),
        case,
        eta: eta.map(|e| e as i8),
    };
    let p = |e: u32| ipow(q as u64, e as u64);
    let m1 = |e: u32| p(e) - 1;
    // q^m / (q^m - 1)
    let near_one = |m: u32| Ratio::new(p(m), m1(m));
    let value = match (case, eta) {
        (ParityCase::NOddDOdd, _) => near_one(n - k - l),
        (ParityCase::NOddDEven, _) => near_one(k - l),
        (ParityCase::NEvenDOdd, None) => near_one(n - l - 1),
        (ParityCase::NEvenDEven, None) => Ratio::new(m1(n - l), p(l) * m1(n - k - l) * m1(k - l)),
        (ParityCase::NEvenDOdd, Some(e)) => Ratio::new(p(n / 2 - 1), p(n / 2 - 1) + e * p(l)),
        (ParityCase::NEvenDEven, Some(e)) => {
            Ratio::new(p(n / 2 - l) * (p(n / 2 - l) + e), m1(n - k - l) * m1(k - l))
        }
    }?;
    Ok((value, branch))
}

pub fn alpha(n: u32, k: u32, l: u32, q: u32) -> Result<Ratio> {
    alpha_with_branch(n, k, l, q).map(|(a, _)| a)
}

/// The exact ratio A_l / A_(l+1), from the counts.
pub fn count_ratio(n: u32, k: u32, l: u32, q: u32) -> Result<Ratio> {
    check_domain(n, k, l, q)?;
    let a = sendrier_count(n, k, l, q)?;
    let b = sendrier_count(n, k, l + 1, q)?;
    if b.is_zero() {
        return Err(Error::DegenerateRatio { n, k, l, q });
    }
    Ratio::new(a.to_bigint(), b.to_bigint())
}

/// The largest integer mu with A_l >= mu * A_(l+1).
pub fn mu(n: u32, k: u32, l: u32, q: u32) -> Result<Count> {
    let r = count_ratio(n, k, l, q)?;
    Count::try_from_bigint(r.floor(), "mu")
}

/// Whether the bound is the halved one: odd q, even n, eta((-1)^(n/2)) = +1
/// and k - l odd.
pub fn half_bound_applies(n: u32, k: u32, l: u32, q: u32) -> Result<bool> {
    let f = Field::of_order(q)?;
    Ok(!f.is_even() && n.is_multiple_of(2) && eta_half(f, n) == 1 && (k - l) % 2 == 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioReport {
    pub q: u32,
    pub n: u32,
    pub k: u32,
    pub l: u32,
    pub alpha: Ratio,
    pub ratio: Ratio,
    pub mu: Count,
    /// q^(l+1) - 1, or half of it when `half_bound` is set.
    pub bound: Ratio,
    pub half_bound: bool,
    pub condition_star: bool,
    pub branch: Branch,
    /// The inequality held: strict for the full bound, weak for the halved one.
    pub satisfied: bool,
    /// The ratio equals the bound exactly.
    pub tight: bool,
}

impl RatioReport {
    /// Six significant digits; for display only.
    pub fn ratio_decimal(&self) -> String {
        self.ratio.to_decimal(6)
    }
}

/// Full analysis of one ratio, cross-checking the closed-form alpha against
/// the counts.
pub fn ratio_report(n: u32, k: u32, l: u32, q: u32) -> Result<RatioReport> {
    let (alpha, branch) = alpha_with_branch(n, k, l, q)?;
    let ratio = count_ratio(n, k, l, q)?;
    let full = Ratio::integer(ipow(q as u64, l as u64 + 1) - 1);
    let from_alpha = &alpha * &full;
    if from_alpha != ratio {
        return Err(Error::Mismatch(format!(
            "alpha({n},{k},{l},{q}) = {alpha} [{branch}] gives ratio {from_alpha}, counts give {ratio}"
        )));
    }
    let half_bound = half_bound_applies(n, k, l, q)?;
    let bound = if half_bound {
        full.checked_div(&Ratio::integer(2))?
    } else {
        full
    };
    let satisfied = if half_bound {
        ratio >= bound
    } else {
        ratio > bound
    };
    Ok(RatioReport {
        q,
        n,
        k,
        l,
        mu: Count::try_from_bigint(ratio.floor(), "mu")?,
        tight: ratio == bound,
        alpha,
        ratio,
        bound,
        half_bound,
        condition_star: condition_star(n, q)?.holds,
        branch,
        satisfied,
    })
}

/// Parameter ranges for a theorem check: every q listed, every n in
/// `min_n..=max_n`, every `1 <= k <= n/2` and `l < k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub qs: Vec<u32>,
    pub min_n: u32,
    pub max_n: u32,
}

impl Grid {
    pub fn tuples(&self) -> Vec<(u32, u32, u32, u32)> {
        let mut qs = self.qs.clone();
        qs.sort_unstable();
        qs.dedup();
        let mut out = Vec::new();
        for &q in &qs {
            for n in self.min_n.max(2)..=self.max_n {
                for k in 1..=n / 2 {
                    for l in 0..k {
                        out.push((q, n, k, l));
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    /// Sorted by (q, n, k, l).
    pub reports: Vec<RatioReport>,
    pub violations: Vec<RatioReport>,
    /// Tuples whose next count is zero, as (q, n, k, l).
    pub degenerate: Vec<(u32, u32, u32, u32)>,
}

/// Checks the ratio inequality on every tuple of the grid. Violations are
/// returned as data; any other failure (a mismatch between alpha and the
/// counts, an invalid q) is an error.
pub fn verify_main_theorem(grid: &Grid) -> Result<TheoremCheck> {
    let results: Vec<_> = grid
        .tuples()
        .into_par_iter()
        .map(|(q, n, k, l)| (q, n, k, l, ratio_report(n, k, l, q)))
        .collect();
    let mut check = TheoremCheck::default();
    for (q, n, k, l, r) in results {
        match r {
            Ok(rep) => {
                if !rep.satisfied {
                    check.violations.push(rep.clone());
                }
                check.reports.push(rep);
            }
            Err(Error::DegenerateRatio { .. }) => check.degenerate.push((q, n, k, l)),
            Err(e) => return Err(e),
        }
    }
    Ok(check)
}

/// What the closed form says about mu without evaluating the counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuPrediction {
    Exact(Count),
    LowerBound(Count),
    NoPrediction,
}

/// Predicts mu in the cases where alpha = q^m / (q^m - 1) for some m >= 1:
/// then alpha * (q^(l+1) - 1) lies in [q^(l+1) - 1, q^(l+1)) when l + 1 < m,
/// equals q^(l+1) when l + 1 = m, and is at least q^(l+1) otherwise.
pub fn predicted_mu(n: u32, k: u32, l: u32, q: u32) -> Result<MuPrediction> {
    let f = check_domain(n, k, l, q)?;
    let d = k - l;
    let m = match (n % 2 == 1, d % 2 == 1) {
        (true, true) => Some(n - k - l),
        (true, false) => Some(d),
        (false, true) if f.is_even() => Some(n - l - 1),
        (false, true) if eta_half(f, n) == -1 => Some(n / 2 - l - 1),
        _ => None,
    };
    let Some(m) = m else {
        return Ok(MuPrediction::NoPrediction);
    };
    let top = q_power(q as u64, l as u64 + 1);
    Ok(match (l + 1).cmp(&m) {
        std::cmp::Ordering::Less => {
            MuPrediction::Exact(Count::try_from_bigint(top.to_bigint() - 1, "predicted mu")?)
        }
        std::cmp::Ordering::Equal => MuPrediction::Exact(top),
        std::cmp::Ordering::Greater => MuPrediction::LowerBound(top),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Ratio {
        Ratio::new(a, b).unwrap()
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(8, 4, 3, 3).unwrap(), r(1, 2));
        assert_eq!(alpha(9, 4, 3, 3).unwrap(), r(9, 8));
        assert_eq!(alpha(10, 5, 4, 2).unwrap(), r(32, 31));
        assert_eq!(count_ratio(10, 5, 4, 2).unwrap(), Ratio::integer(32));
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu(9, 4, 3, 2).unwrap(), Count::from(20));
        assert_eq!(mu(9, 4, 2, 2).unwrap(), Count::from(9));
        assert_eq!(mu(10, 5, 4, 2).unwrap(), Count::from(32));
        assert_eq!(mu(8, 4, 3, 3).unwrap(), Count::from(40));
    }

    #[test]
    fn degenerate_tuple_is_typed() {
        assert!(matches!(
            alpha(10, 5, 4, 3),
            Err(Error::DegenerateRatio { .. })
        ));
        assert!(matches!(mu(6, 3, 2, 7), Err(Error::DegenerateRatio { .. })));
        // -1 is a square mod 5, so the same shape is fine there
        assert!(alpha(10, 5, 4, 5).is_ok());
        let msg = alpha(2, 1, 0, 3).unwrap_err().to_string();
        assert!(msg.contains("self-orthogonal"), "{msg}");
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(alpha(8, 5, 0, 2), Err(Error::Domain(_))));
        assert!(matches!(alpha(8, 4, 4, 2), Err(Error::Domain(_))));
        assert!(matches!(alpha(8, 0, 0, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn tight_half_bound() {
        let rep = ratio_report(8, 4, 3, 3).unwrap();
        assert!(rep.half_bound && rep.tight && rep.satisfied);
        assert_eq!(rep.ratio, Ratio::integer(40));
        assert!(!rep.condition_star);
    }

    #[test]
    fn predictions() {
        assert_eq!(
            predicted_mu(10, 5, 4, 2).unwrap(),
            MuPrediction::Exact(Count::from(32))
        );
        assert_eq!(
            predicted_mu(9, 4, 0, 3).unwrap(),
            MuPrediction::Exact(Count::from(2))
        );
        assert_eq!(
            predicted_mu(9, 4, 3, 2).unwrap(),
            MuPrediction::LowerBound(Count::from(16))
        );
        assert_eq!(
            predicted_mu(8, 4, 1, 2).unwrap(),
            MuPrediction::Exact(Count::from(3))
        );
        assert_eq!(
            predicted_mu(8, 4, 2, 2).unwrap(),
            MuPrediction::NoPrediction
        );
        assert_eq!(
            predicted_mu(8, 4, 0, 3).unwrap(),
            MuPrediction::NoPrediction
        );
    }

    #[test]
    fn small_grid_has_no_violations() {
        let check = verify_main_theorem(&Grid {
            qs: vec![3, 2],
            min_n: 2,
            max_n: 8,
        })
        .unwrap();
        assert!(check.violations.is_empty());
        assert_eq!(check.degenerate, vec![(3, 2, 1, 0), (3, 6, 3, 2)]);
        let keys: Vec<_> = check.reports.iter().map(|r| (r.q, r.n, r.k, r.l)).collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        assert_eq!(keys, sorted);
    }
}
