use super::poly::{Assignment, RationalPoly};
use crate::error::{usage, Result};

/// Ordered polynomial system where polynomial `i` introduces `solved_vars[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularSet {
    label: String,
    polys: Vec<RationalPoly>,
    solved_vars: Vec<String>,
}

impl TriangularSet {
    /// Checks the triangular shape: poly `i` has positive degree in
    /// `solved_vars[i]` and does not involve any later solved variable.
    pub fn new(label: &str, polys: Vec<RationalPoly>, solved_vars: &[&str]) -> Result<Self> {
        if polys.len() != solved_vars.len() || polys.is_empty() {
            return usage("a triangular set needs one new variable per polynomial");
        }
        for (i, p) in polys.iter().enumerate() {
            if p.degree_in(solved_vars[i]) == 0 {
                return usage(format!("{label}: polynomial {i} does not involve `{}`", solved_vars[i]));
            }
            for later in &solved_vars[i + 1..] {
                if p.degree_in(later) > 0 {
                    return usage(format!("{label}: polynomial {i} involves later variable `{later}`"));
                }
            }
        }
        Ok(TriangularSet {
            label: label.to_string(),
            polys,
            solved_vars: solved_vars.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn polys(&self) -> &[RationalPoly] {
        &self.polys
    }

    pub fn solved_vars(&self) -> &[String] {
        &self.solved_vars
    }

    /// Variables that are not solved for (the symbolic parameters).
    pub fn parameters(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for p in &self.polys {
            for v in p.used_vars() {
                if !self.solved_vars.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// Substitute parameter values into every polynomial.
    pub fn specialize(&self, params: &Assignment) -> Result<Self> {
        let polys: Vec<RationalPoly> = self.polys.iter().map(|p| p.substitute(params)).collect();
        let vars: Vec<&str> = self.solved_vars.iter().map(|s| s.as_str()).collect();
        TriangularSet::new(&self.label, polys, &vars)
    }

    /// Last polynomial is of degree one in its variable, so back-substitution is rational.
    pub fn is_rationally_solvable(&self) -> bool {
        let n = self.polys.len();
        self.polys[n - 1].degree_in(&self.solved_vars[n - 1]) == 1
    }
}
