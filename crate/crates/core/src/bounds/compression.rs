use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::Representation;
use crate::graphwalk::{perron_data, DecoratedGraph, PerronData};
use crate::groups::FiniteGroup;
use crate::spectral::{operator_norm, operator_norm_of, project_mean_zero, CMatrix, LinearOperator, DENSE_EIGEN_LIMIT};

/// `|| sum_i x_i^2 rho(t_i) ||_op` with `x` the unit Perron vector: the norm
/// of `U` compressed to the top eigenspace of `A (x) I`.
pub fn compression_d(graph: &DecoratedGraph, rep: &Representation) -> Result<f64> {
    let perron = perron_data(graph)?;
    compression_with(graph, rep, &perron)
}

pub fn compression_with(graph: &DecoratedGraph, rep: &Representation, perron: &PerronData) -> Result<f64> {
    let k = rep.dim();
    let mut sum = CMatrix::zeros(k, k);
    for (t, x) in graph.decorations().iter().zip(&perron.vector) {
        sum += rep.eval(t)? * Complex64::new(x * x, 0.0);
    }
    operator_norm(&sum)
}

/// `sum_i w_i R(t_i)` on mean-zero functions on the group, with
/// `(R(t) f)(g) = f(g t)`.
struct RegularCompression {
    weights: Vec<f64>,
    forward: Vec<Vec<usize>>,
    backward: Vec<Vec<usize>>,
}

impl LinearOperator for RegularCompression {
    fn dim(&self) -> usize {
        self.forward[0].len()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        let mut input = x.to_vec();
        project_mean_zero(&mut input, x.len());
        y.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for (w, table) in self.weights.iter().zip(&self.forward) {
            for (g, out) in y.iter_mut().enumerate() {
                *out += input[table[g]] * *w;
            }
        }
        project_mean_zero(y, x.len());
    }

    fn apply_adjoint(&self, x: &[Complex64], y: &mut [Complex64]) {
        let mut input = x.to_vec();
        project_mean_zero(&mut input, x.len());
        y.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for (w, table) in self.weights.iter().zip(&self.backward) {
            for (g, out) in y.iter_mut().enumerate() {
                *out += input[table[g]] * *w;
            }
        }
        project_mean_zero(y, x.len());
    }
}

/// Largest compression over all nontrivial irreducibles, computed on the
/// regular representation so no explicit dual is needed.
pub fn compression_d_regular(graph: &DecoratedGraph, group: &FiniteGroup) -> Result<f64> {
    let perron = perron_data(graph)?;
    compression_regular_with(graph, group, &perron)
}

pub fn compression_regular_with(graph: &DecoratedGraph, group: &FiniteGroup, perron: &PerronData) -> Result<f64> {
    if group.order() == 1 {
        return Ok(0.0);
    }
    let t = graph.decoration_indices(group)?;
    let op = RegularCompression {
        weights: perron.vector.iter().map(|x| x * x).collect(),
        forward: t.iter().map(|&tv| group.right_translation(tv)).collect(),
        backward: t.iter().map(|&tv| group.right_translation(group.inverse_idx(tv))).collect(),
    };
    if op.dim() <= DENSE_EIGEN_LIMIT {
        let dense = op.to_dense();
        let sv = dense.singular_values();
        Ok(sv.iter().copied().fold(0.0, f64::max))
    } else {
        operator_norm_of(&op)
    }
}

/// `1 - x_min^2 epsilon_1^2 / 8`, the compression bound implied by a
/// pair-separation constant `epsilon_1`.
pub fn d_from_kazhdan(perron: &PerronData, epsilon1: f64) -> Result<f64> {
    if !(epsilon1 > 0.0 && epsilon1 <= 2.0) {
        return Err(Error::Domain(format!("epsilon_1 = {epsilon1} must lie in (0, 2]")));
    }
    let x_min = perron.min_component();
    Ok(1.0 - x_min * x_min * epsilon1 * epsilon1 / 8.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::unitary_dual;
    use crate::groups::Element;

    fn k2(m: u64, a: u64, b: u64) -> DecoratedGraph {
        DecoratedGraph::k2_with_loops(Element::Cyclic { m, r: a }, Element::Cyclic { m, r: b }).unwrap()
    }

    #[test]
    fn scalar_examples() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let dual = unitary_dual(&z2).unwrap();
        let sign = &dual.reps()[1];
        assert!(compression_d(&k2(2, 0, 1), sign).unwrap() < 1e-12);
        let z3 = FiniteGroup::cyclic(3).unwrap();
        for rho in unitary_dual(&z3).unwrap().nontrivial() {
            assert!((compression_d(&k2(3, 0, 1), rho).unwrap() - 0.5).abs() < 1e-12);
        }
        assert!((compression_d_regular(&k2(3, 0, 1), &z3).unwrap() - 0.5).abs() < 1e-12);
        assert!(compression_d_regular(&k2(2, 0, 1), &z2).unwrap() < 1e-12);
    }

    #[test]
    fn equal_decorations_give_one() {
        let d4 = FiniteGroup::dihedral(4).unwrap();
        let t = Element::Dihedral { m: 4, rot: 1, flip: true };
        let g = DecoratedGraph::new(vec![vec![1, 1, 1], vec![1, 0, 1], vec![1, 1, 0]], vec![t.clone(); 3]).unwrap();
        for rho in unitary_dual(&d4).unwrap().reps() {
            assert!((compression_d(&g, rho).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn regular_is_max_over_irreducibles() {
        let d4 = FiniteGroup::dihedral(4).unwrap();
        let r = Element::Dihedral { m: 4, rot: 1, flip: false };
        let s = Element::Dihedral { m: 4, rot: 0, flip: true };
        let g = DecoratedGraph::new(vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]], vec![r, s.clone(), s]).unwrap();
        let best = unitary_dual(&d4).unwrap().nontrivial().map(|rho| compression_d(&g, rho).unwrap()).fold(0.0, f64::max);
        assert!((best - compression_d_regular(&g, &d4).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn kazhdan_substitution() {
        let perron = PerronData { lambda_max: 2.0, vector: vec![0.5f64.sqrt(); 2], second_modulus: 0.0, ratio: 0.0, residual: 0.0 };
        assert!((d_from_kazhdan(&perron, 2.0).unwrap() - 0.75).abs() < 1e-15);
        assert!(1.0 - d_from_kazhdan(&perron, 1e-6).unwrap() < 1e-12);
        assert!(d_from_kazhdan(&perron, 0.0).is_err());
        assert!(d_from_kazhdan(&perron, 2.5).is_err());
    }

    #[test]
    fn kazhdan_bound_dominates_exact() {
        use crate::bounds::tprime_epsilon;
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let g = k2(3, 0, 1);
        let perron = perron_data(&g).unwrap();
        let eps = tprime_epsilon(&z3, &g.decoration_indices(&z3).unwrap()).unwrap().epsilon1;
        assert!(d_from_kazhdan(&perron, eps).unwrap() >= compression_d_regular(&g, &z3).unwrap());
    }
}
