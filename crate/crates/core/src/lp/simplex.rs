//! Dense tableau simplex with Bland's rule, generic over an exact number type
//! whose arithmetic may report overflow.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Overflow;

pub(crate) type Res<T> = std::result::Result<T, Overflow>;

pub(crate) trait Field: Clone + PartialOrd {
    fn nil() -> Self;
    fn unit() -> Self;
    fn from_rational(r: &Rational) -> Res<Self>;
    fn to_rational(&self) -> Rational;
    fn vanishes(&self) -> bool;
    fn positive(&self) -> bool;
    fn negative(&self) -> bool;
    fn plus(&self, o: &Self) -> Res<Self>;
    fn minus(&self, o: &Self) -> Res<Self>;
    fn times(&self, o: &Self) -> Res<Self>;
    fn over(&self, o: &Self) -> Res<Self>;
}

pub(crate) type Small = Ratio<i64>;

impl Field for Small {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn from_rational(r: &Rational) -> Res<Self> {
        let n = i64::try_from(r.numer()).map_err(|_| Overflow)?;
        let d = i64::try_from(r.denom()).map_err(|_| Overflow)?;
        Ok(Ratio::new_raw(n, d))
    }
    fn to_rational(&self) -> Rational {
        Rational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn plus(&self, o: &Self) -> Res<Self> {
        self.checked_add(o).ok_or(Overflow)
    }
    fn minus(&self, o: &Self) -> Res<Self> {
        self.checked_sub(o).ok_or(Overflow)
    }
    fn times(&self, o: &Self) -> Res<Self> {
        self.checked_mul(o).ok_or(Overflow)
    }
    fn over(&self, o: &Self) -> Res<Self> {
        self.checked_div(o).ok_or(Overflow)
    }
}

impl Field for Rational {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn from_rational(r: &Rational) -> Res<Self> {
        Ok(r.clone())
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn plus(&self, o: &Self) -> Res<Self> {
        Ok(self + o)
    }
    fn minus(&self, o: &Self) -> Res<Self> {
        Ok(self - o)
    }
    fn times(&self, o: &Self) -> Res<Self> {
        Ok(self * o)
    }
    fn over(&self, o: &Self) -> Res<Self> {
        Ok(self / o)
    }
}

/// Equality-form problem `A·x = b`, `x ≥ 0`, `b ≥ 0`. Rows may name a column
/// that equals the unit vector `e_row` (a slack) to start the basis with;
/// the others get an artificial column.
pub(crate) struct Standard {
    pub rows: Vec<Vec<(usize, Rational)>>,
    pub rhs: Vec<Rational>,
    pub columns: usize,
    pub unit_column: Vec<Option<usize>>,
}

pub(crate) enum Outcome {
    Optimal,
    /// Entering column with no blocking row.
    Unbounded(usize),
}

#[derive(Clone)]
pub(crate) struct Tableau<F: Field> {
    pub a: Vec<Vec<F>>,
    pub b: Vec<F>,
    pub d: Vec<F>,
    pub z: F,
    pub basis: Vec<usize>,
    pub banned: Vec<bool>,
    /// Columns `columns..` are artificial.
    pub columns: usize,
    /// Column that started basic in each row (slack or artificial).
    pub start: Vec<usize>,
}

impl<F: Field> Tableau<F> {
    /// Builds the phase-one tableau minimising the sum of artificials.
    pub fn phase_one(s: &Standard) -> Res<Self> {
        let m = s.rows.len();
        let artificial_rows: Vec<usize> = (0..m).filter(|&i| s.unit_column[i].is_none()).collect();
        let n = s.columns + artificial_rows.len();
        let mut a = vec![vec![F::nil(); n]; m];
        for (i, row) in s.rows.iter().enumerate() {
            for (j, v) in row {
                a[i][*j] = F::from_rational(v)?;
            }
        }
        let b = s.rhs.iter().map(F::from_rational).collect::<Res<Vec<F>>>()?;
        let mut basis = vec![0; m];
        let mut d = vec![F::nil(); n];
        let mut z = F::nil();
        let mut next = s.columns;
        for i in 0..m {
            match s.unit_column[i] {
                Some(j) => basis[i] = j,
                None => {
                    a[i][next] = F::unit();
                    basis[i] = next;
                    next += 1;
                    d[basis[i]] = F::unit();
                }
            }
        }
        for &i in &artificial_rows {
            for j in 0..s.columns {
                if !a[i][j].vanishes() {
                    d[j] = d[j].minus(&a[i][j])?;
                }
            }
            z = z.plus(&b[i])?;
        }
        for &i in &artificial_rows {
            d[basis[i]] = F::nil();
        }
        let start = basis.clone();
        Ok(Tableau {
            a,
            b,
            d,
            z,
            basis,
            banned: vec![false; n],
            columns: s.columns,
            start,
        })
    }

    pub fn pivot(&mut self, p: usize, q: usize) -> Res<()> {
        let piv = self.a[p][q].clone();
        let nz: Vec<usize> = (0..self.a[p].len()).filter(|&j| !self.a[p][j].vanishes()).collect();
        for &j in &nz {
            self.a[p][j] = self.a[p][j].over(&piv)?;
        }
        self.b[p] = self.b[p].over(&piv)?;
        let (before, rest) = self.a.split_at_mut(p);
        let (prow, after) = rest.split_first_mut().expect("pivot row exists");
        for (r, row) in before.iter_mut().chain(after.iter_mut()).enumerate() {
            let r = if r < p { r } else { r + 1 };
            let f = row[q].clone();
            if f.vanishes() {
                continue;
            }
            for &j in &nz {
                row[j] = row[j].minus(&f.times(&prow[j])?)?;
            }
            self.b[r] = self.b[r].minus(&f.times(&self.b[p])?)?;
        }
        let f = self.d[q].clone();
        if !f.vanishes() {
            for &j in &nz {
                self.d[j] = self.d[j].minus(&f.times(&prow[j])?)?;
            }
            self.z = self.z.plus(&f.times(&self.b[p])?)?;
        }
        self.basis[p] = q;
        Ok(())
    }

    /// Minimises the current objective with Bland's rule.
    pub fn optimise(&mut self) -> Res<Outcome> {
        loop {
            let Some(q) = (0..self.d.len()).find(|&j| !self.banned[j] && self.d[j].negative()) else {
                return Ok(Outcome::Optimal);
            };
            let mut best: Option<(usize, F)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][q].positive() {
                    continue;
                }
                let ratio = self.b[i].over(&self.a[i][q])?;
                let better = match &best {
                    None => true,
                    Some((k, r)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*k]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((p, _)) => self.pivot(p, q)?,
                None => return Ok(Outcome::Unbounded(q)),
            }
        }
    }

    /// Current basic solution over the non-artificial columns.
    pub fn point(&self) -> Vec<F> {
        let mut x = vec![F::nil(); self.columns];
        for (i, &j) in self.basis.iter().enumerate() {
            if j < self.columns {
                x[j] = self.b[i].clone();
            }
        }
        x
    }

    /// Dual values `y_i = c(start_i) − d(start_i)` of the phase-one problem.
    pub fn phase_one_duals(&self) -> Res<Vec<F>> {
        self.start
            .iter()
            .map(|&j| {
                let cost = if j >= self.columns { F::unit() } else { F::nil() };
                cost.minus(&self.d[j])
            })
            .collect()
    }

    /// Removes artificials from the basis and installs cost vector `c` over
    /// the non-artificial columns. Requires a zero phase-one optimum.
    pub fn phase_two(&mut self, c: &[F]) -> Res<()> {
        for j in self.columns..self.banned.len() {
            self.banned[j] = true;
        }
        for i in 0..self.a.len() {
            if self.basis[i] >= self.columns {
                if let Some(j) = (0..self.columns).find(|&j| !self.a[i][j].vanishes()) {
                    self.pivot(i, j)?;
                }
            }
        }
        let n = self.d.len();
        let mut d: Vec<F> = (0..n)
            .map(|j| if j < self.columns { c[j].clone() } else { F::nil() })
            .collect();
        let mut z = F::nil();
        for (i, &bj) in self.basis.iter().enumerate() {
            if bj >= self.columns || c[bj].vanishes() {
                continue;
            }
            for (j, dj) in d.iter_mut().enumerate() {
                if !self.a[i][j].vanishes() {
                    *dj = dj.minus(&c[bj].times(&self.a[i][j])?)?;
                }
            }
            z = z.plus(&c[bj].times(&self.b[i])?)?;
        }
        self.d = d;
        self.z = z;
        Ok(())
    }

    /// Point moved a step `t` along the ray opened by entering column `q`.
    pub fn ray_point(&self, q: usize, t: &F) -> Res<Vec<F>> {
        let mut x = self.point();
        x[q] = x[q].plus(t)?;
        for (i, &j) in self.basis.iter().enumerate() {
            if j < self.columns {
                x[j] = x[j].minus(&t.times(&self.a[i][q])?)?;
            }
        }
        Ok(x)
    }
}
