use crate::gpt::{linalg, Effect, GptSystem, State};
use crate::numerics::{LinearProgram, Relation, Scalar};
use crate::verdict::EffectMode;

/// A sparse row `Σ coeff · x_index (rel) rhs`.
type SparseRow = (Vec<(usize, Scalar)>, Relation, Scalar);

/// Sparse constraint collector producing a [`LinearProgram`].
#[derive(Default)]
pub(crate) struct LpBuilder {
    free: Vec<bool>,
    rows: Vec<SparseRow>,
}

/// An effect `f = Σ_i x_{start+i} · basis[i]` living in an LP.
pub(crate) struct EffectVars {
    start: usize,
    basis: Vec<Vec<Scalar>>,
}

impl EffectVars {
    pub fn pairing(&self, s: &State) -> Vec<(usize, Scalar)> {
        self.basis
            .iter()
            .enumerate()
            .map(|(i, b)| (self.start + i, linalg::dot(b, s.coords())))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }

    pub fn coordinate(&self, k: usize) -> Vec<(usize, Scalar)> {
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, b)| !b[k].is_zero())
            .map(|(i, b)| (self.start + i, b[k].clone()))
            .collect()
    }

    pub fn extract(&self, point: &[Scalar], dim: usize) -> Effect {
        let mut coords = vec![Scalar::zero(); dim];
        for (i, b) in self.basis.iter().enumerate() {
            let x = &point[self.start + i];
            if !x.is_zero() {
                coords = linalg::add(&coords, &linalg::scale(b, x));
            }
        }
        Effect(coords)
    }
}

impl LpBuilder {
    pub fn vars(&mut self, n: usize, free: bool) -> usize {
        let start = self.free.len();
        self.free.extend(std::iter::repeat_n(free, n));
        start
    }

    pub fn constrain(&mut self, terms: Vec<(usize, Scalar)>, relation: Relation, rhs: Scalar) {
        self.rows.push((terms, relation, rhs));
    }

    /// Adds an effect variable. With `bounded`, the effect is also kept
    /// below the unit; joint measurements get that from their sum instead.
    pub fn effect(&mut self, sys: &GptSystem, mode: EffectMode, bounded: bool) -> EffectVars {
        let d = sys.dim();
        match mode {
            EffectMode::NoRestriction => {
                let start = self.vars(d, true);
                let basis: Vec<Vec<Scalar>> = (0..d)
                    .map(|i| (0..d).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
                    .collect();
                let vars = EffectVars { start, basis };
                for s in sys.pure_states() {
                    let terms = vars.pairing(s);
                    self.constrain(terms.clone(), Relation::Ge, Scalar::zero());
                    if bounded {
                        self.constrain(terms, Relation::Le, Scalar::one());
                    }
                }
                vars
            }
            EffectMode::Generated => {
                let gens: Vec<Vec<Scalar>> = sys.effect_generators().iter().map(|g| g.coords().to_vec()).collect();
                let start = self.vars(gens.len(), false);
                let vars = EffectVars { start, basis: gens.clone() };
                if bounded {
                    let rest = EffectVars { start: self.vars(gens.len(), false), basis: gens };
                    for k in 0..d {
                        let mut terms = vars.coordinate(k);
                        terms.extend(rest.coordinate(k));
                        self.constrain(terms, Relation::Eq, sys.unit().coords()[k].clone());
                    }
                }
                vars
            }
        }
    }

    pub fn build(self) -> LinearProgram<Scalar> {
        let n = self.free.len();
        let mut lp = LinearProgram::new(n);
        for (j, free) in self.free.iter().enumerate() {
            if *free {
                lp.set_free(j).expect("index in range");
            }
        }
        for (terms, relation, rhs) in self.rows {
            let mut row = vec![Scalar::zero(); n];
            for (j, v) in terms {
                row[j] = &row[j] + &v;
            }
            lp.add_constraint(row, relation, rhs);
        }
        lp
    }
}
