//! Equations of the polynomial closures and the membership decision.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::equiv::{EquivEngine, PairRelation};
use crate::error::Result;
use crate::lang::Dfa;
use crate::monoid::{Congruence, FiniteMonoid};
use crate::prevariety::{ClassExpr, PolOp};
use crate::syntactic::{syntactic_morphism, MonoidMorphism};

/// Elements instantiating a failed equation. `q` and `r` are only used by
/// the mixed equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub s: usize,
    pub t: usize,
    pub q: Option<usize>,
    pub r: Option<usize>,
    pub lhs: usize,
    pub rhs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationReport {
    pub op: PolOp,
    pub holds: bool,
    pub violation: Option<Violation>,
}

impl EquationReport {
    /// Recomputes both sides of the recorded violation.
    pub fn verify(&self, m: &FiniteMonoid) -> bool {
        match &self.violation {
            None => self.holds,
            Some(v) => {
                let (lhs, rhs) = sides(self.op, m, m.omega(), v.s, v.t, v.q, v.r);
                !self.holds && lhs == v.lhs && rhs == v.rhs && lhs != rhs
            }
        }
    }
}

/// Left and right side of the equation of `op` at the given elements.
pub fn sides(
    op: PolOp,
    m: &FiniteMonoid,
    omega: usize,
    s: usize,
    t: usize,
    q: Option<usize>,
    r: Option<usize>,
) -> (usize, usize) {
    match op {
        PolOp::U => {
            let e = m.pow(s, omega);
            (m.mul(e, s), m.mul_all([e, t, e]))
        }
        PolOp::L => {
            let e = m.pow(s, omega);
            (m.mul(e, s), m.mul(e, t))
        }
        PolOp::R => {
            let e = m.pow(s, omega);
            (m.mul(e, s), m.mul(t, e))
        }
        PolOp::M => {
            let x = m.pow(m.mul(s, q.unwrap_or(m.unit())), omega);
            let y = m.pow(m.mul(r.unwrap_or(m.unit()), s), omega);
            (m.mul_all([x, s, y]), m.mul_all([x, t, y]))
        }
    }
}

fn check_over<I>(op: PolOp, m: &FiniteMonoid, pairs: I) -> EquationReport
where
    I: IntoIterator<Item = (usize, usize)>,
{
    let omega = m.omega();
    let n = m.size();
    let fail = |v: Violation| EquationReport {
        op,
        holds: false,
        violation: Some(v),
    };
    // for the mixed equation, distinct (sq)^ω and (rs)^ω per s
    let mut flanks: Vec<Option<(Vec<(usize, usize)>, Vec<(usize, usize)>)>> = vec![None; n];
    for (s, t) in pairs {
        if op != PolOp::M {
            let (lhs, rhs) = sides(op, m, omega, s, t, None, None);
            if lhs != rhs {
                return fail(Violation {
                    s,
                    t,
                    q: None,
                    r: None,
                    lhs,
                    rhs,
                });
            }
            continue;
        }
        let (xs, ys) = flanks[s].get_or_insert_with(|| {
            let mut xs: Vec<(usize, usize)> = Vec::new();
            let mut ys: Vec<(usize, usize)> = Vec::new();
            for q in m.elements() {
                let x = m.pow(m.mul(s, q), omega);
                if !xs.iter().any(|&(v, _)| v == x) {
                    xs.push((x, q));
                }
                let y = m.pow(m.mul(q, s), omega);
                if !ys.iter().any(|&(v, _)| v == y) {
                    ys.push((y, q));
                }
            }
            (xs, ys)
        });
        for &(x, q) in xs.iter() {
            let xs_ = m.mul(x, s);
            let xt = m.mul(x, t);
            for &(y, r) in ys.iter() {
                let lhs = m.mul(xs_, y);
                let rhs = m.mul(xt, y);
                if lhs != rhs {
                    return fail(Violation {
                        s,
                        t,
                        q: Some(q),
                        r: Some(r),
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    EquationReport {
        op,
        holds: true,
        violation: None,
    }
}

/// Equation of `op` quantified over `s ~ t`.
pub fn check_equation(op: PolOp, m: &FiniteMonoid, eq: &Congruence) -> EquationReport {
    check_over(op, m, eq.pairs())
}

/// Equation of `op` quantified over a pair relation (C-pairs).
pub fn check_equation_pairs(op: PolOp, m: &FiniteMonoid, pairs: &PairRelation) -> EquationReport {
    check_over(op, m, pairs.pairs())
}

pub fn check_upol(m: &FiniteMonoid, eq: &Congruence) -> EquationReport {
    check_equation(PolOp::U, m, eq)
}

pub fn check_lpol(m: &FiniteMonoid, eq: &Congruence) -> EquationReport {
    check_equation(PolOp::L, m, eq)
}

pub fn check_rpol(m: &FiniteMonoid, eq: &Congruence) -> EquationReport {
    check_equation(PolOp::R, m, eq)
}

pub fn check_mpol(m: &FiniteMonoid, eq: &Congruence) -> EquationReport {
    check_equation(PolOp::M, m, eq)
}

/// Outcome of a membership decision, with the first failing equation when
/// the top layer is an operator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub class: String,
    pub member: bool,
    pub monoid_size: usize,
    pub failure: Option<EquationReport>,
}

/// Whether every language recognized by `alpha` belongs to `class`.
pub fn is_class_morphism(class: &ClassExpr, alpha: &MonoidMorphism, cfg: &Config) -> Result<bool> {
    let class = class.expand()?;
    let mut engine = EquivEngine::new(alpha, cfg);
    let id = Congruence::identity(alpha.size());
    Ok(engine.accepts(&class, &id)?.holds)
}

pub fn membership_report(class: &ClassExpr, l: &Dfa, cfg: &Config) -> Result<MembershipReport> {
    let expanded = class.expand()?;
    let syn = syntactic_morphism(l);
    let alpha = &syn.morphism;
    let mut engine = EquivEngine::new(alpha, cfg);
    let id = Congruence::identity(alpha.size());
    let verdict = engine.accepts(&expanded, &id)?;
    Ok(MembershipReport {
        class: class.to_string(),
        member: verdict.holds,
        monoid_size: alpha.size(),
        failure: verdict.report.filter(|r| !r.holds),
    })
}

pub fn decide_membership(class: &ClassExpr, l: &Dfa, cfg: &Config) -> Result<bool> {
    Ok(membership_report(class, l, cfg)?.member)
}
