//! PDE coefficients and the front speeds derived from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Issue};

/// The two competing species.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Species {
    U,
    V,
}

impl std::fmt::Display for Species {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Species::U => write!(f, "u"),
            Species::V => write!(f, "v"),
        }
    }
}

/// Coefficients of the two-species competition system
///
/// ```text
/// u_t = d Δu + r u (1 - u - a v)
/// v_t =   Δv +   v (1 - v - b u)
/// ```
///
/// `u` diffuses at rate `d` and grows at rate `r`; `v` has unit diffusion and
/// growth. `a` is the pressure of `v` on `u`, `b` the pressure of `u` on `v`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub d: f64,
    pub r: f64,
    pub a: f64,
    pub b: f64,
}

impl Params {
    pub fn new(d: f64, r: f64, a: f64, b: f64) -> Result<Self, Error> {
        let p = Params { d, r, a, b };
        let mut issues = Vec::new();
        p.validate("params", &mut issues);
        if issues.is_empty() {
            Ok(p)
        } else {
            Err(Error::Invalid(issues))
        }
    }

    pub fn validate(&self, path: &str, issues: &mut Vec<Issue>) {
        for (name, v) in [("d", self.d), ("r", self.r)] {
            if !(v.is_finite() && v > 0.0) {
                issues.push(Issue {
                    path: format!("{path}.{name}"),
                    message: format!("must be positive and finite (got {v})"),
                });
            }
        }
        for (name, v) in [("a", self.a), ("b", self.b)] {
            if !v.is_finite() {
                issues.push(Issue {
                    path: format!("{path}.{name}"),
                    message: "must be finite".to_string(),
                });
            }
        }
    }

    /// Linear spreading speed of `u` alone: 2√(d·r).
    pub fn c_u(&self) -> f64 {
        2.0 * (self.d * self.r).sqrt()
    }

    /// Linear spreading speed of `v` alone.
    pub fn c_v(&self) -> f64 {
        2.0
    }

    /// Both exclusion states (1,0) and (0,1) are stable iff a > 1 and b > 1.
    pub fn strong_competition(&self) -> bool {
        self.a > 1.0 && self.b > 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn speeds() {
        let p = Params::new(1.0, 1.0, 2.0, 2.0).unwrap();
        assert_eq!(p.c_u(), 2.0);
        assert_eq!(p.c_v(), 2.0);
        assert_eq!(Params::new(2.0, 2.0, 2.0, 2.0).unwrap().c_u(), 4.0);
        assert_eq!(Params::new(1.0, 0.25, 2.0, 2.0).unwrap().c_u(), 1.0);
    }

    #[test]
    fn strong_competition_gate() {
        assert!(Params::new(1.0, 1.0, 1.5, 1.1).unwrap().strong_competition());
        assert!(!Params::new(1.0, 1.0, 0.5, 2.0).unwrap().strong_competition());
        assert!(!Params::new(1.0, 1.0, 2.0, 1.0).unwrap().strong_competition());
    }

    #[test]
    fn rejects_nonpositive_rates() {
        let err = Params::new(0.0, 1.0, 2.0, 2.0).unwrap_err();
        assert!(err.to_string().contains("params.d"));
    }
}
