use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};
use crate::model::FiniteTuple;

/// A polynomial in `n` commuting variables, as a list of monomials.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<F> {
    n: usize,
    terms: Vec<(F, Vec<u32>)>,
}

impl<F: Scalar> Polynomial<F> {
    pub fn new(n: usize, terms: Vec<(F, Vec<u32>)>) -> Result<Self> {
        if let Some((_, e)) = terms.iter().find(|(_, e)| e.len() != n) {
            return Err(Error::Length {
                expected: n,
                found: e.len(),
            });
        }
        Ok(Polynomial { n, terms })
    }

    /// The coordinate function `z_i`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Polynomial {
            n,
            terms: vec![(F::one(), e)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(F, Vec<u32>)] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .filter(|(c, _)| !c.is_zero())
            .map(|(_, e)| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, z: &[F]) -> Result<F> {
        if z.len() != self.n {
            return Err(Error::Length {
                expected: self.n,
                found: z.len(),
            });
        }
        let mut acc = F::zero();
        for (c, e) in &self.terms {
            let mut m = c.clone();
            for (zi, &k) in z.iter().zip(e) {
                for _ in 0..k {
                    m = m * zi.clone();
                }
            }
            acc = acc + m;
        }
        Ok(acc)
    }

    /// `p(T₁, …, T_n)`.
    pub fn apply(&self, t: &FiniteTuple<F>) -> Result<Matrix<F>> {
        if t.len() != self.n {
            return Err(Error::Length {
                expected: self.n,
                found: t.len(),
            });
        }
        let mut acc = Matrix::zeros(t.dim(), t.dim());
        for (c, e) in &self.terms {
            let mut m = Matrix::scalar(t.dim(), c.clone());
            for (op, &k) in t.ops().iter().zip(e) {
                if k > 0 {
                    m = m.mul(&op.pow(k)?)?;
                }
            }
            acc = acc.add(&m)?;
        }
        Ok(acc)
    }
}

/// A polynomial map `ℂⁿ → ℂᵐ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialMap<F> {
    components: Vec<Polynomial<F>>,
}

impl<F: Scalar> PolynomialMap<F> {
    pub fn new(components: Vec<Polynomial<F>>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::Input("polynomial map needs a component".into()))?;
        if components.iter().any(|p| p.n != first.n) {
            return Err(Error::Input("components of a polynomial map disagree on n".into()));
        }
        Ok(PolynomialMap { components })
    }

    pub fn identity(n: usize) -> Self {
        PolynomialMap {
            components: (0..n).map(|i| Polynomial::coordinate(n, i)).collect(),
        }
    }

    pub fn components(&self) -> &[Polynomial<F>] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.components.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, z: &[F]) -> Result<Vec<F>> {
        self.components.iter().map(|p| p.eval(z)).collect()
    }
}

/// The tuple `(p₁(T), …, p_m(T))`.
pub fn polynomial_image<F: Scalar>(t: &FiniteTuple<F>, p: &PolynomialMap<F>) -> Result<FiniteTuple<F>> {
    let ops = p.components.iter().map(|c| c.apply(t)).collect::<Result<_>>()?;
    FiniteTuple::new(ops)
}
