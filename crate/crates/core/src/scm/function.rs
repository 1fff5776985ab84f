/// Input to a [`StructuralFunction::Product`] factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductInput {
    Parent(usize),
    /// The node's own exogenous noise term.
    Noise,
}

/// `coef * prod(x[node]^power)`; an empty power list is a constant term.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coef: f64,
    pub powers: Vec<(usize, i32)>,
}

/// Piecewise-constant function over a rectangular grid of parent values.
///
/// Cell `k` along axis `d` covers `[lo[d] + k*step[d], lo[d] + (k+1)*step[d])`;
/// the upper edge of the last cell is included. Values are stored row-major
/// with the last axis varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularGrid {
    pub parents: Vec<usize>,
    pub lo: Vec<f64>,
    pub step: Vec<f64>,
    pub counts: Vec<usize>,
    pub values: Vec<f64>,
}

impl TabularGrid {
    pub fn is_well_formed(&self) -> bool {
        let d = self.parents.len();
        d > 0
            && self.lo.len() == d
            && self.step.len() == d
            && self.counts.len() == d
            && self.step.iter().all(|s| s.is_finite() && *s > 0.0)
            && self.counts.iter().all(|&c| c > 0)
            && self.values.len() == self.counts.iter().product::<usize>()
    }

    fn lookup(&self, values: &[f64]) -> Result<f64, OutOfGrid> {
        let mut flat = 0usize;
        for (d, &p) in self.parents.iter().enumerate() {
            let x = values[p];
            let rel = (x - self.lo[d]) / self.step[d];
            let n = self.counts[d];
            if !(rel >= 0.0 && rel <= n as f64) {
                return Err(OutOfGrid(x));
            }
            let k = (rel.floor() as usize).min(n - 1);
            flat = flat * n + k;
        }
        Ok(self.values[flat])
    }
}

/// The closed library of structural equations.
#[derive(Debug, Clone, PartialEq)]
pub enum StructuralFunction {
    Constant(f64),
    /// `offset + sum(w * x[parent])`, weights sorted by parent index.
    Linear { weights: Vec<(usize, f64)>, offset: f64 },
    Polynomial(Vec<Monomial>),
    Product(ProductInput, ProductInput),
    Tabular(TabularGrid),
}

/// A tabular function was probed outside its grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutOfGrid(pub f64);

impl StructuralFunction {
    pub fn linear(weights: impl IntoIterator<Item = (usize, f64)>, offset: f64) -> Self {
        let mut weights: Vec<(usize, f64)> = weights.into_iter().collect();
        weights.sort_by_key(|&(p, _)| p);
        StructuralFunction::Linear { weights, offset }
    }

    /// Node indices the function reads, without duplicates.
    pub fn referenced_nodes(&self) -> Vec<usize> {
        let mut out: Vec<usize> = match self {
            StructuralFunction::Constant(_) => vec![],
            StructuralFunction::Linear { weights, .. } => weights.iter().map(|&(p, _)| p).collect(),
            StructuralFunction::Polynomial(terms) => {
                terms.iter().flat_map(|t| t.powers.iter().map(|&(p, _)| p)).collect()
            }
            StructuralFunction::Product(a, b) => [a, b]
                .into_iter()
                .filter_map(|i| match i {
                    ProductInput::Parent(p) => Some(*p),
                    ProductInput::Noise => None,
                })
                .collect(),
            StructuralFunction::Tabular(g) => g.parents.clone(),
        };
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn uses_noise(&self) -> bool {
        matches!(self, StructuralFunction::Product(a, b) if *a == ProductInput::Noise || *b == ProductInput::Noise)
    }

    pub fn is_well_formed(&self) -> bool {
        match self {
            StructuralFunction::Constant(k) => k.is_finite(),
            StructuralFunction::Linear { weights, offset } => {
                offset.is_finite() && weights.iter().all(|(_, w)| w.is_finite())
            }
            StructuralFunction::Polynomial(terms) => terms.iter().all(|t| t.coef.is_finite()),
            StructuralFunction::Product(..) => true,
            StructuralFunction::Tabular(g) => g.is_well_formed(),
        }
    }

    /// Evaluates the function reading parents from the node-indexed `values`.
    /// `noise` feeds [`ProductInput::Noise`] and is ignored by every other form.
    pub fn eval(&self, values: &[f64], noise: f64) -> Result<f64, OutOfGrid> {
        Ok(match self {
            StructuralFunction::Constant(k) => *k,
            StructuralFunction::Linear { weights, offset } => {
                weights.iter().fold(*offset, |acc, &(p, w)| acc + w * values[p])
            }
            StructuralFunction::Polynomial(terms) => terms
                .iter()
                .map(|t| t.powers.iter().fold(t.coef, |acc, &(p, k)| acc * values[p].powi(k)))
                .sum(),
            StructuralFunction::Product(a, b) => {
                let get = |i: &ProductInput| match i {
                    ProductInput::Parent(p) => values[*p],
                    ProductInput::Noise => noise,
                };
                get(a) * get(b)
            }
            StructuralFunction::Tabular(g) => g.lookup(values)?,
        })
    }

    /// True when the function is affine in the noise input with a slope that
    /// does not involve the noise, so `E[g(pa, U)] = g(pa, E[U])`.
    pub fn is_affine_in_noise(&self) -> bool {
        match self {
            StructuralFunction::Product(a, b) => !(*a == ProductInput::Noise && *b == ProductInput::Noise),
            _ => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation() {
        let x = [2.0, -1.0, 0.5];
        assert_eq!(StructuralFunction::Constant(3.0).eval(&x, 0.0).unwrap(), 3.0);
        assert_eq!(StructuralFunction::linear([(0, 1.5), (2, 2.0)], 1.0).eval(&x, 0.0).unwrap(), 5.0);
        let poly = StructuralFunction::Polynomial(vec![
            Monomial { coef: 1.0, powers: vec![(0, 2)] },
            Monomial { coef: 3.0, powers: vec![(0, 1), (1, 1)] },
            Monomial { coef: 0.5, powers: vec![] },
        ]);
        assert_eq!(poly.eval(&x, 0.0).unwrap(), 4.0 - 6.0 + 0.5);
        let prod = StructuralFunction::Product(ProductInput::Noise, ProductInput::Parent(0));
        assert_eq!(prod.eval(&x, -1.0).unwrap(), -2.0);
        assert!(prod.uses_noise());
        assert_eq!(prod.referenced_nodes(), vec![0]);
    }

    #[test]
    fn tabular_grid() {
        let g = TabularGrid {
            parents: vec![0],
            lo: vec![0.0],
            step: vec![1.0],
            counts: vec![3],
            values: vec![10.0, 20.0, 30.0],
        };
        let f = StructuralFunction::Tabular(g);
        assert!(f.is_well_formed());
        assert_eq!(f.eval(&[0.0], 0.0).unwrap(), 10.0);
        assert_eq!(f.eval(&[1.5], 0.0).unwrap(), 20.0);
        assert_eq!(f.eval(&[3.0], 0.0).unwrap(), 30.0);
        assert_eq!(f.eval(&[3.1], 0.0), Err(OutOfGrid(3.1)));
        assert_eq!(f.eval(&[-0.1], 0.0), Err(OutOfGrid(-0.1)));
    }
}
