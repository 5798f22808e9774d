//! Exact rational feasibility of linear constraint systems, with a
//! re-checkable witness for both answers.

mod simplex;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use simplex::{Field, Outcome, Overflow, Res, Small, Standard, Tableau};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    fn lhs(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(v, c)| c * &x[*v]).sum()
    }

    fn holds(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearConstraintSystem {
    variables: Vec<String>,
    constraints: Vec<Constraint>,
}

impl LinearConstraintSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(&mut self, name: impl Into<String>) -> usize {
        self.variables.push(name.into());
        self.variables.len() - 1
    }

    /// Panics if a coefficient names an undeclared variable.
    pub fn add_constraint(&mut self, coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) -> usize {
        for (v, _) in &coeffs {
            assert!(*v < self.variables.len(), "coefficient for undeclared variable {v}");
        }
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self.constraints.len() - 1
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Does `x` satisfy every constraint?
    pub fn check_assignment(&self, x: &[Rational]) -> bool {
        x.len() == self.variables.len() && self.constraints.iter().all(|c| c.holds(x))
    }

    /// Is `mu` a Farkas certificate: signs match the relations (`≥` rows
    /// nonnegative, `≤` rows nonpositive), the combined left-hand side vanishes
    /// and the combined right-hand side is positive, i.e. `0 ≥ positive`.
    pub fn check_farkas(&self, mu: &[Rational]) -> bool {
        if mu.len() != self.constraints.len() {
            return false;
        }
        let mut combined = vec![Rational::zero(); self.variables.len()];
        let mut rhs = Rational::zero();
        for (c, m) in self.constraints.iter().zip(mu) {
            let sign_ok = match c.relation {
                Relation::Ge => !m.is_negative(),
                Relation::Le => !m.is_positive(),
                Relation::Eq => true,
            };
            if !sign_ok {
                return false;
            }
            if m.is_zero() {
                continue;
            }
            for (v, a) in &c.coeffs {
                combined[*v] += m * a;
            }
            rhs += m * &c.rhs;
        }
        combined.iter().all(Zero::is_zero) && rhs.is_positive()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeasibilityResult {
    Feasible { assignment: Vec<Rational> },
    Infeasible { farkas: Vec<Rational> },
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible { .. })
    }
}

/// Counters over every solve in the process.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LpAudit {
    pub solves: u64,
    pub verified: u64,
    pub failures: u64,
}

static SOLVES: AtomicU64 = AtomicU64::new(0);
static VERIFIED: AtomicU64 = AtomicU64::new(0);
static FAILURES: AtomicU64 = AtomicU64::new(0);

pub fn audit() -> LpAudit {
    LpAudit {
        solves: SOLVES.load(Ordering::Relaxed),
        verified: VERIFIED.load(Ordering::Relaxed),
        failures: FAILURES.load(Ordering::Relaxed),
    }
}

fn record(ok: bool) {
    if ok {
        VERIFIED.fetch_add(1, Ordering::Relaxed);
    } else {
        FAILURES.fetch_add(1, Ordering::Relaxed);
        debug_assert!(false, "exact LP result failed its own check");
    }
}

/// Standard form of a system plus the bookkeeping to map answers back.
struct Presolved {
    standard: Standard,
    /// Positive and negative part columns of each kept variable.
    columns: Vec<Option<(usize, Option<usize>)>>,
    /// Merged variables point at the kept variable with the same column.
    representative: Vec<usize>,
    /// Constraint giving `x_v ≥ 0`, if one was found.
    bound: Vec<Option<usize>>,
    /// Row index and sign flip of each non-bound constraint.
    row_of: Vec<Option<(usize, bool)>>,
}

fn merged(c: &Constraint) -> Vec<(usize, Rational)> {
    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
    for (v, a) in &c.coeffs {
        *acc.entry(*v).or_insert_with(Rational::zero) += a;
    }
    acc.into_iter().filter(|(_, a)| !a.is_zero()).collect()
}

fn presolve(lcs: &LinearConstraintSystem) -> Presolved {
    let nv = lcs.variables.len();
    let rows: Vec<Vec<(usize, Rational)>> = lcs.constraints.iter().map(merged).collect();
    let mut bound: Vec<Option<usize>> = vec![None; nv];
    let mut is_bound = vec![false; rows.len()];
    for (i, (c, row)) in lcs.constraints.iter().zip(&rows).enumerate() {
        if row.len() == 1 && c.rhs.is_zero() {
            let (v, a) = &row[0];
            let nonneg = match c.relation {
                Relation::Ge => a.is_positive(),
                Relation::Le => a.is_negative(),
                Relation::Eq => false,
            };
            if nonneg {
                is_bound[i] = true;
                bound[*v].get_or_insert(i);
            }
        }
    }

    // Nonnegative variables with identical columns are interchangeable.
    let mut column_entries: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); nv];
    for (i, row) in rows.iter().enumerate() {
        if !is_bound[i] {
            for (v, a) in row {
                column_entries[*v].push((i, a.clone()));
            }
        }
    }
    let mut representative: Vec<usize> = (0..nv).collect();
    let mut seen: HashMap<&[(usize, Rational)], usize> = HashMap::new();
    for v in 0..nv {
        if bound[v].is_some() {
            let r = *seen.entry(&column_entries[v]).or_insert(v);
            representative[v] = r;
        }
    }

    let mut columns = vec![None; nv];
    let mut next = 0;
    for v in 0..nv {
        if representative[v] != v {
            continue;
        }
        let p = next;
        next += 1;
        let n = if bound[v].is_none() {
            next += 1;
            Some(next - 1)
        } else {
            None
        };
        columns[v] = Some((p, n));
    }
    let mut row_of = vec![None; rows.len()];
    let mut srows = Vec::new();
    let mut rhs = Vec::new();
    let mut unit_column = Vec::new();
    for (i, (c, row)) in lcs.constraints.iter().zip(&rows).enumerate() {
        if is_bound[i] {
            continue;
        }
        let flip = c.rhs.is_negative();
        let sign = |a: &Rational| if flip { -a } else { a.clone() };
        let mut entries = Vec::new();
        for (v, a) in row {
            if let Some((p, n)) = columns[*v] {
                entries.push((p, sign(a)));
                if let Some(n) = n {
                    entries.push((n, -sign(a)));
                }
            }
        }
        let mut unit = None;
        match c.relation {
            Relation::Eq => {}
            Relation::Le | Relation::Ge => {
                let slack = next;
                next += 1;
                let coef = if c.relation == Relation::Le { Rational::one() } else { -Rational::one() };
                let coef = sign(&coef);
                if coef.is_positive() {
                    unit = Some(slack);
                }
                entries.push((slack, coef));
            }
        }
        row_of[i] = Some((srows.len(), flip));
        srows.push(entries);
        rhs.push(sign(&c.rhs));
        unit_column.push(unit);
    }
    Presolved {
        standard: Standard {
            rows: srows,
            rhs,
            columns: next,
            unit_column,
        },
        columns,
        representative,
        bound,
        row_of,
    }
}

impl Presolved {
    fn assignment<F: Field>(&self, point: &[F]) -> Res<Vec<Rational>> {
        self.columns
            .iter()
            .map(|cols| match cols {
                None => Ok(Rational::zero()),
                Some((p, None)) => Ok(point[*p].to_rational()),
                Some((p, Some(n))) => Ok(point[*p].minus(&point[*n])?.to_rational()),
            })
            .collect()
    }

    fn farkas<F: Field>(&self, lcs: &LinearConstraintSystem, tab: &Tableau<F>) -> Res<Vec<Rational>> {
        let y = tab.phase_one_duals()?;
        let mut mu = vec![Rational::zero(); lcs.constraints.len()];
        for (i, r) in self.row_of.iter().enumerate() {
            if let Some((row, flip)) = r {
                let v = y[*row].to_rational();
                mu[i] = if *flip { -v } else { v };
            }
        }
        let mut combined = vec![Rational::zero(); lcs.variables.len()];
        for (c, m) in lcs.constraints.iter().zip(&mu) {
            if !m.is_zero() {
                for (v, a) in &c.coeffs {
                    combined[*v] += m * a;
                }
            }
        }
        for (v, g) in combined.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            if let Some(b) = self.bound[v] {
                let coef: Rational = merged(&lcs.constraints[b])[0].1.clone();
                mu[b] += -g / coef;
            }
        }
        Ok(mu)
    }
}

fn solve_generic<F: Field>(lcs: &LinearConstraintSystem, pre: &Presolved) -> Res<FeasibilityResult> {
    let mut tab: Tableau<F> = Tableau::phase_one(&pre.standard)?;
    tab.optimise()?;
    if tab.z.vanishes() {
        Ok(FeasibilityResult::Feasible {
            assignment: pre.assignment(&tab.point())?,
        })
    } else {
        Ok(FeasibilityResult::Infeasible {
            farkas: pre.farkas(lcs, &tab)?,
        })
    }
}

/// Exact feasibility with a self-checked witness: a satisfying assignment or
/// Farkas multipliers (one per constraint).
pub fn solve_feasibility(lcs: &LinearConstraintSystem) -> FeasibilityResult {
    SOLVES.fetch_add(1, Ordering::Relaxed);
    let pre = presolve(lcs);
    let result = solve_generic::<Small>(lcs, &pre)
        .or_else(|Overflow| solve_generic::<Rational>(lcs, &pre))
        .expect("big rationals do not overflow");
    let ok = match &result {
        FeasibilityResult::Feasible { assignment } => lcs.check_assignment(assignment),
        FeasibilityResult::Infeasible { farkas } => lcs.check_farkas(farkas),
    };
    record(ok);
    result
}

/// Variables that are positive in some feasible solution, each with a
/// verified feasible point where it is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Support {
    pub variables: Vec<usize>,
    pub witnesses: BTreeMap<usize, Vec<Rational>>,
}

fn support_generic<F: Field>(lcs: &LinearConstraintSystem, pre: &Presolved) -> Res<Option<Support>> {
    let mut base: Tableau<F> = Tableau::phase_one(&pre.standard)?;
    base.optimise()?;
    if !base.z.vanishes() {
        return Ok(None);
    }
    let nv = lcs.variables.len();
    let mut witnesses: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
    let note = |x: Vec<Rational>, witnesses: &mut BTreeMap<usize, Vec<Rational>>| {
        for v in 0..nv {
            if x[v].is_positive() && !witnesses.contains_key(&v) {
                witnesses.insert(v, x.clone());
            }
        }
    };
    note(pre.assignment(&base.point())?, &mut witnesses);
    let ncols = pre.standard.columns;
    for v in 0..nv {
        let Some((p, n)) = pre.columns[v] else { continue };
        if witnesses.contains_key(&v) {
            continue;
        }
        let mut tab = base.clone();
        let mut c = vec![F::nil(); ncols];
        c[p] = F::nil().minus(&F::unit())?;
        if let Some(n) = n {
            c[n] = F::unit();
        }
        tab.phase_two(&c)?;
        let point = match tab.optimise()? {
            Outcome::Optimal => tab.point(),
            Outcome::Unbounded(q) => {
                let x0 = pre.assignment(&tab.point())?[v].clone();
                let x1 = pre.assignment(&tab.ray_point(q, &F::unit())?)?[v].clone();
                let rate = &x1 - &x0;
                let t = if x0.is_positive() { Rational::one() } else { -&x0 / &rate + Rational::one() };
                tab.ray_point(q, &F::from_rational(&t)?)?
            }
        };
        note(pre.assignment(&point)?, &mut witnesses);
    }
    // Merged variables take over their representative's witness.
    for v in 0..nv {
        let r = pre.representative[v];
        if r != v {
            if let Some(w) = witnesses.get(&r) {
                let mut x = w.clone();
                x[v] = x[r].clone();
                x[r] = Rational::zero();
                witnesses.insert(v, x);
            }
        }
    }
    Ok(Some(Support {
        variables: witnesses.keys().copied().collect(),
        witnesses,
    }))
}

/// Exactly the variables that are positive in some feasible point, found by
/// one maximisation probe per variable not already seen positive.
pub fn support_edges(lcs: &LinearConstraintSystem) -> Result<Support> {
    SOLVES.fetch_add(1, Ordering::Relaxed);
    let pre = presolve(lcs);
    let support = support_generic::<Small>(lcs, &pre)
        .or_else(|Overflow| support_generic::<Rational>(lcs, &pre))
        .expect("big rationals do not overflow")
        .ok_or(Error::Infeasible)?;
    let ok = support
        .witnesses
        .iter()
        .all(|(v, x)| x[*v].is_positive() && lcs.check_assignment(x));
    record(ok);
    Ok(support)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn sys(nv: usize, rows: &[(&[i64], Relation, i64)]) -> LinearConstraintSystem {
        let mut l = LinearConstraintSystem::new();
        for i in 0..nv {
            l.add_variable(format!("x{i}"));
        }
        for (c, r, b) in rows {
            let coeffs = c.iter().enumerate().filter(|(_, a)| **a != 0).map(|(v, a)| (v, int(*a))).collect();
            l.add_constraint(coeffs, *r, int(*b));
        }
        l
    }

    #[test]
    fn contradiction_gives_unit_multipliers() {
        let l = sys(1, &[(&[1], Relation::Ge, 1), (&[-1], Relation::Ge, 0)]);
        match solve_feasibility(&l) {
            FeasibilityResult::Infeasible { farkas } => {
                assert_eq!(farkas, vec![int(1), int(1)]);
                assert!(l.check_farkas(&farkas));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_lower_bound() {
        let l = sys(1, &[(&[1], Relation::Ge, 1)]);
        assert_eq!(
            solve_feasibility(&l),
            FeasibilityResult::Feasible {
                assignment: vec![int(1)]
            }
        );
    }

    #[test]
    fn empty_system_is_feasible() {
        let l = LinearConstraintSystem::new();
        assert_eq!(solve_feasibility(&l), FeasibilityResult::Feasible { assignment: vec![] });
    }

    #[test]
    fn supports() {
        let l = sys(
            2,
            &[(&[1, 1], Relation::Eq, 1), (&[1, 0], Relation::Ge, 0), (&[0, 1], Relation::Ge, 0)],
        );
        assert_eq!(support_edges(&l).unwrap().variables, vec![0, 1]);
        let l = sys(2, &[(&[1, 0], Relation::Eq, 0), (&[1, 0], Relation::Ge, 0), (&[0, 1], Relation::Ge, 1)]);
        assert_eq!(support_edges(&l).unwrap().variables, vec![1]);
        let l = sys(1, &[(&[1], Relation::Ge, 1), (&[1], Relation::Le, 0)]);
        assert_eq!(support_edges(&l), Err(Error::Infeasible));
    }

    #[test]
    fn support_of_free_variable_via_ray() {
        // x free, y ≥ 0, x − y = −5: x is positive once y > 5.
        let l = sys(2, &[(&[1, -1], Relation::Eq, -5), (&[0, 1], Relation::Ge, 0)]);
        let s = support_edges(&l).unwrap();
        assert_eq!(s.variables, vec![0, 1]);
        assert!(s.witnesses[&0][0].is_positive());
    }

    #[test]
    fn duplicate_columns_are_merged_and_restored() {
        // x0, x1 identical nonnegative columns, x2 ≥ 0: x0 + x1 − x2 = 0, x2 ≥ 1.
        let l = sys(
            3,
            &[
                (&[1, 1, -1], Relation::Eq, 0),
                (&[0, 0, 1], Relation::Ge, 1),
                (&[1, 0, 0], Relation::Ge, 0),
                (&[0, 1, 0], Relation::Ge, 0),
                (&[0, 0, 1], Relation::Ge, 0),
            ],
        );
        let s = support_edges(&l).unwrap();
        assert_eq!(s.variables, vec![0, 1, 2]);
        match solve_feasibility(&l) {
            FeasibilityResult::Feasible { assignment } => assert!(l.check_assignment(&assignment)),
            other => panic!("{other:?}"),
        }
        let l = sys(2, &[(&[1, 1], Relation::Le, -1), (&[1, 0], Relation::Ge, 0), (&[0, 1], Relation::Ge, 0)]);
        match solve_feasibility(&l) {
            FeasibilityResult::Infeasible { farkas } => assert!(l.check_farkas(&farkas)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fractional_solution() {
        let l = sys(2, &[(&[2, 0], Relation::Eq, 1), (&[1, -3], Relation::Eq, 0)]);
        assert_eq!(
            solve_feasibility(&l),
            FeasibilityResult::Feasible {
                assignment: vec![ratio(1, 2), ratio(1, 6)]
            }
        );
    }

    #[test]
    fn big_coefficients_fall_back_to_big_rationals() {
        let big = i64::MAX / 3;
        let l = sys(2, &[(&[big, big - 1], Relation::Ge, big), (&[big - 2, -big], Relation::Eq, 3)]);
        let r = solve_feasibility(&l);
        match &r {
            FeasibilityResult::Feasible { assignment } => assert!(l.check_assignment(assignment)),
            FeasibilityResult::Infeasible { farkas } => assert!(l.check_farkas(farkas)),
        }
    }

    /// Brute force over a small grid of rational points.
    fn grid_feasible(l: &LinearConstraintSystem) -> bool {
        let vals: Vec<Rational> = (-6..=6).map(|n| ratio(n, 2)).collect();
        let nv = l.variables().len();
        let mut idx = vec![0; nv];
        loop {
            let x: Vec<Rational> = idx.iter().map(|&i| vals[i].clone()).collect();
            if l.check_assignment(&x) {
                return true;
            }
            let mut d = 0;
            while d < nv {
                idx[d] += 1;
                if idx[d] < vals.len() {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
            if d == nv {
                return false;
            }
        }
    }

    fn relation() -> impl Strategy<Value = Relation> {
        prop_oneof![Just(Relation::Le), Just(Relation::Eq), Just(Relation::Ge)]
    }

    proptest! {
        #[test]
        fn answers_always_self_verify(
            rows in prop::collection::vec((prop::collection::vec(-3i64..=3, 3), relation(), -4i64..=4), 0..6)
        ) {
            let rows: Vec<(&[i64], Relation, i64)> = rows.iter().map(|(c, r, b)| (&c[..], *r, *b)).collect();
            let l = sys(3, &rows);
            match solve_feasibility(&l) {
                FeasibilityResult::Feasible { assignment } => prop_assert!(l.check_assignment(&assignment)),
                FeasibilityResult::Infeasible { farkas } => {
                    prop_assert!(l.check_farkas(&farkas));
                    prop_assert!(!grid_feasible(&l));
                }
            }
        }

        #[test]
        fn support_matches_witnesses(
            rows in prop::collection::vec((prop::collection::vec(-2i64..=2, 3), relation(), -2i64..=2), 0..4)
        ) {
            let mut rows: Vec<(Vec<i64>, Relation, i64)> = rows;
            for v in 0..3 {
                let mut c = vec![0; 3];
                c[v] = 1;
                rows.push((c, Relation::Ge, 0));
            }
            let rows: Vec<(&[i64], Relation, i64)> = rows.iter().map(|(c, r, b)| (&c[..], *r, *b)).collect();
            let l = sys(3, &rows);
            if let Ok(s) = support_edges(&l) {
                // A variable outside the support is zero at every grid point.
                let vals: Vec<Rational> = (0..=4).map(|n| ratio(n, 2)).collect();
                for a in &vals { for b in &vals { for c in &vals {
                    let x = vec![a.clone(), b.clone(), c.clone()];
                    if l.check_assignment(&x) {
                        for v in 0..3 {
                            if x[v].is_positive() {
                                prop_assert!(s.variables.contains(&v));
                            }
                        }
                    }
                }}}
            }
            prop_assert_eq!(audit().failures, 0);
        }
    }
}
