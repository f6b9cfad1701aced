//! Unitary irreducible representations of the supported families and the
//! Fourier transform on finite groups.
//!
//! Supported: cyclic groups, dihedral groups, and direct products of
//! supported groups (irreducibles of a product are tensor products of
//! irreducibles of the factors). Other groups have no explicit dual here;
//! use the regular-representation operators in [`crate::spectral`].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{Element, Family, FiniteGroup};
use crate::spectral::{operator_norm, CMatrix};

#[derive(Debug, Clone, PartialEq)]
enum RepKind {
    /// `r -> exp(2 pi i r k / m)` on `Z/m`.
    Character { m: u64, k: u64 },
    /// One-dimensional rep of `D_m`; rotations map to `rot_sign`, the
    /// reflection to `flip_sign`.
    DihedralLinear { rot_sign: f64, flip_sign: f64 },
    /// Two-dimensional rep of `D_m`: rotation by `2 pi h / m`, reflection
    /// `diag(1, -1)`.
    DihedralPlanar { m: u64, h: u64 },
    /// Tensor product of one irreducible per factor of a direct product.
    Tensor(Vec<Representation>),
}

/// A unitary representation, evaluated element by element.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    kind: RepKind,
    dim: usize,
    trivial: bool,
    label: String,
}

fn scalar(z: Complex64) -> CMatrix {
    CMatrix::from_element(1, 1, z)
}

impl Representation {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, e: &Element) -> Result<CMatrix> {
        let bad = || Error::MixedGroups(format!("representation {} cannot evaluate {e}", self.label));
        match (&self.kind, e) {
            (RepKind::Character { m, k }, Element::Cyclic { m: em, r }) if m == em => {
                let angle = 2.0 * PI * ((r * k) % m) as f64 / *m as f64;
                Ok(scalar(Complex64::from_polar(1.0, angle)))
            }
            (RepKind::DihedralLinear { rot_sign, flip_sign }, Element::Dihedral { rot, flip, .. }) => {
                let mut v = if rot % 2 == 1 { *rot_sign } else { 1.0 };
                if *flip {
                    v *= flip_sign;
                }
                Ok(scalar(Complex64::new(v, 0.0)))
            }
            (RepKind::DihedralPlanar { m, h }, Element::Dihedral { m: em, rot, flip }) if m == em => {
                let angle = 2.0 * PI * ((rot * h) % m) as f64 / *m as f64;
                let (s, c) = angle.sin_cos();
                let f = if *flip { -1.0 } else { 1.0 };
                // R(angle) * diag(1, f)
                Ok(CMatrix::from_row_slice(
                    2,
                    2,
                    &[
                        Complex64::new(c, 0.0),
                        Complex64::new(-s * f, 0.0),
                        Complex64::new(s, 0.0),
                        Complex64::new(c * f, 0.0),
                    ],
                ))
            }
            (RepKind::Tensor(parts), Element::Tuple(xs)) if parts.len() == xs.len() => {
                let mut acc = scalar(Complex64::new(1.0, 0.0));
                for (rep, x) in parts.iter().zip(xs) {
                    acc = acc.kronecker(&rep.eval(x)?);
                }
                Ok(acc)
            }
            _ => Err(bad()),
        }
    }

    /// `[chi(g) for g in group]`, the character as a vector.
    pub fn character(&self, group: &FiniteGroup) -> Result<Vec<Complex64>> {
        group.elements().iter().map(|g| Ok(self.eval(g)?.trace())).collect()
    }
}

/// All pairwise-inequivalent irreducible unitary representations of a group,
/// trivial representation first.
#[derive(Debug, Clone)]
pub struct UnitaryDual {
    reps: Vec<Representation>,
    group_order: usize,
}

impl UnitaryDual {
    pub fn reps(&self) -> &[Representation] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    /// `sum of d_rho^2`, equal to the group order for a complete dual.
    pub fn plancherel_sum(&self) -> usize {
        self.reps.iter().map(|r| r.dim * r.dim).sum()
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &Representation> {
        self.reps.iter().filter(|r| !r.trivial)
    }
}

fn dual_reps(group: &FiniteGroup) -> Result<Vec<Representation>> {
    match group.family() {
        Family::Cyclic { m } => Ok((0..*m)
            .map(|k| Representation {
                kind: RepKind::Character { m: *m, k },
                dim: 1,
                trivial: k == 0,
                label: format!("chi_{k}"),
            })
            .collect()),
        Family::Dihedral { m } => {
            let m = *m;
            let linear = |rot_sign: f64, flip_sign: f64, label: &str| Representation {
                kind: RepKind::DihedralLinear { rot_sign, flip_sign },
                dim: 1,
                trivial: rot_sign > 0.0 && flip_sign > 0.0,
                label: label.to_string(),
            };
            let mut reps = vec![linear(1.0, 1.0, "trivial"), linear(1.0, -1.0, "sign")];
            if m % 2 == 0 {
                reps.push(linear(-1.0, 1.0, "alt_rot"));
                reps.push(linear(-1.0, -1.0, "alt_rot_sign"));
            }
            for h in 1..=(m.saturating_sub(1)) / 2 {
                reps.push(Representation {
                    kind: RepKind::DihedralPlanar { m, h },
                    dim: 2,
                    trivial: false,
                    label: format!("planar_{h}"),
                });
            }
            Ok(reps)
        }
        Family::Product(factors) => {
            let mut combos: Vec<Vec<Representation>> = vec![Vec::new()];
            for f in factors {
                let reps = dual_reps(f)?;
                combos = combos
                    .into_iter()
                    .flat_map(|prefix| {
                        reps.iter().map(move |r| {
                            let mut c = prefix.clone();
                            c.push(r.clone());
                            c
                        })
                    })
                    .collect();
            }
            Ok(combos
                .into_iter()
                .map(|parts| {
                    let dim = parts.iter().map(|r| r.dim).product();
                    let trivial = parts.iter().all(|r| r.trivial);
                    let label = parts.iter().map(|r| r.label.as_str()).collect::<Vec<_>>().join("(x)");
                    Representation { kind: RepKind::Tensor(parts), dim, trivial, label }
                })
                .collect())
        }
        _ => Err(Error::Capability(format!(
            "no explicit unitary dual for {}; use the regular transfer operator instead",
            group.describe()
        ))),
    }
}

pub fn unitary_dual(group: &FiniteGroup) -> Result<UnitaryDual> {
    let reps = dual_reps(group)?;
    Ok(UnitaryDual { reps, group_order: group.order() })
}

/// One matrix per member of a dual, in dual order.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierData {
    pub blocks: Vec<CMatrix>,
}

#[derive(Serialize, Deserialize)]
struct BlockJson {
    dimension: usize,
    matrix: Vec<[f64; 2]>,
}

impl FourierData {
    pub fn to_json(&self) -> serde_json::Value {
        let blocks: Vec<BlockJson> = self
            .blocks
            .iter()
            .map(|b| BlockJson {
                dimension: b.nrows(),
                matrix: (0..b.nrows())
                    .flat_map(|i| (0..b.ncols()).map(move |j| (i, j)))
                    .map(|(i, j)| [b[(i, j)].re, b[(i, j)].im])
                    .collect(),
            })
            .collect();
        serde_json::to_value(blocks).expect("plain data serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let blocks: Vec<BlockJson> =
            serde_json::from_value(v.clone()).map_err(|e| Error::Domain(format!("bad Fourier data: {e}")))?;
        let blocks = blocks
            .into_iter()
            .map(|b| {
                if b.matrix.len() != b.dimension * b.dimension {
                    return Err(Error::Domain(format!(
                        "block of dimension {} has {} entries",
                        b.dimension,
                        b.matrix.len()
                    )));
                }
                Ok(CMatrix::from_row_iterator(
                    b.dimension,
                    b.dimension,
                    b.matrix.iter().map(|[re, im]| Complex64::new(*re, *im)),
                ))
            })
            .collect::<Result<_>>()?;
        Ok(Self { blocks })
    }
}

/// `sum over gamma of f(gamma) rho(gamma)`, with `f` indexed by the group's
/// canonical element order.
pub fn fourier_transform(group: &FiniteGroup, f: &[Complex64], rep: &Representation) -> Result<CMatrix> {
    if f.len() != group.order() {
        return Err(Error::Domain(format!("function has {} values, group order {}", f.len(), group.order())));
    }
    let mut acc = CMatrix::zeros(rep.dim, rep.dim);
    for (g, &v) in group.elements().iter().zip(f) {
        if v != Complex64::new(0.0, 0.0) {
            acc += rep.eval(g)? * v;
        }
    }
    Ok(acc)
}

pub fn transform_all(group: &FiniteGroup, f: &[Complex64], dual: &UnitaryDual) -> Result<FourierData> {
    let blocks = dual.reps.iter().map(|r| fourier_transform(group, f, r)).collect::<Result<_>>()?;
    Ok(FourierData { blocks })
}

/// `g(gamma) = (1/|G|) sum_rho d_rho tr(F(rho) rho(gamma^{-1}))`.
pub fn inverse_transform(group: &FiniteGroup, data: &FourierData, dual: &UnitaryDual) -> Result<Vec<Complex64>> {
    if data.blocks.len() != dual.len() {
        return Err(Error::Domain(format!("{} blocks for a dual of size {}", data.blocks.len(), dual.len())));
    }
    for (b, r) in data.blocks.iter().zip(&dual.reps) {
        if b.nrows() != r.dim || b.ncols() != r.dim {
            return Err(Error::Domain(format!(
                "block of shape {}x{} for {}-dimensional {}",
                b.nrows(),
                b.ncols(),
                r.dim,
                r.label
            )));
        }
    }
    let order = group.order() as f64;
    group
        .elements()
        .iter()
        .map(|g| {
            let g_inv = g.inverse()?;
            let mut acc = Complex64::new(0.0, 0.0);
            for (b, r) in data.blocks.iter().zip(&dual.reps) {
                acc += (b * r.eval(&g_inv)?).trace() * r.dim as f64;
            }
            Ok(acc / order)
        })
        .collect()
}

/// Uniformity certificate obtained from the nontrivial Fourier blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformityBound {
    /// Largest operator norm over nontrivial blocks.
    pub epsilon: f64,
    /// Certified bound on `|g(a) - g(b)|` for all `a, b`.
    pub pairwise_bound: f64,
    /// For probability distributions: bound on `|g(a) - 1/|G||`.
    pub per_value_bound: Option<f64>,
}

impl UniformityBound {
    /// For a distribution, `|sum over Omega of g - |Omega|/|G|| <= 2 eps |Omega|`.
    pub fn subset_bound(&self, subset_size: usize) -> Option<f64> {
        self.per_value_bound.map(|b| b * subset_size as f64)
    }
}

pub fn uniformity_bound(group: &FiniteGroup, data: &FourierData, dual: &UnitaryDual) -> Result<UniformityBound> {
    let mut epsilon: f64 = 0.0;
    let mut total = None;
    for (b, r) in data.blocks.iter().zip(&dual.reps) {
        if r.trivial {
            total = Some(b[(0, 0)]);
        } else {
            epsilon = epsilon.max(operator_norm(b)?);
        }
    }
    let values = inverse_transform(group, data, dual)?;
    let real = values.iter().all(|v| v.im.abs() <= 1e-12);
    let sums_to_one = total.is_some_and(|t| (t - Complex64::new(1.0, 0.0)).norm() <= 1e-9);
    Ok(UniformityBound {
        epsilon,
        pairwise_bound: 2.0 * epsilon,
        per_value_bound: (real && sums_to_one).then_some(2.0 * epsilon),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn homomorphism_and_unitarity(group: &FiniteGroup, dual: &UnitaryDual) {
        for r in dual.reps() {
            let id = r.eval(group.identity()).unwrap();
            assert!((id.clone() - CMatrix::identity(r.dim(), r.dim())).norm() <= 1e-10);
            for a in group.elements() {
                let ra = r.eval(a).unwrap();
                let uu = &ra * ra.adjoint();
                assert!((uu - CMatrix::identity(r.dim(), r.dim())).norm() <= 1e-10);
                for b in group.elements() {
                    let lhs = r.eval(&a.mul(b).unwrap()).unwrap();
                    assert!((lhs - &ra * r.eval(b).unwrap()).norm() <= 1e-10, "{} on {a},{b}", r.label());
                }
            }
        }
    }

    fn distinct_characters(group: &FiniteGroup, dual: &UnitaryDual) {
        let chars: Vec<Vec<Complex64>> = dual.reps().iter().map(|r| r.character(group).unwrap()).collect();
        for i in 0..chars.len() {
            for j in i + 1..chars.len() {
                let diff: f64 = chars[i].iter().zip(&chars[j]).map(|(a, b)| (a - b).norm()).sum();
                assert!(diff > 1e-6, "{} ~ {}", dual.reps()[i].label(), dual.reps()[j].label());
            }
        }
    }

    #[test]
    fn supported_duals_are_complete() {
        let groups = vec![
            FiniteGroup::cyclic(4).unwrap(),
            FiniteGroup::dihedral(3).unwrap(),
            FiniteGroup::dihedral(4).unwrap(),
            FiniteGroup::dihedral(5).unwrap(),
            FiniteGroup::dihedral(1).unwrap(),
            FiniteGroup::product(vec![FiniteGroup::cyclic(2).unwrap(), FiniteGroup::cyclic(2).unwrap()]).unwrap(),
            FiniteGroup::product(vec![FiniteGroup::cyclic(3).unwrap(), FiniteGroup::dihedral(4).unwrap()]).unwrap(),
        ];
        for g in &groups {
            let dual = unitary_dual(g).unwrap();
            assert_eq!(dual.plancherel_sum(), g.order(), "{}", g.describe());
            assert!(dual.reps()[0].is_trivial());
            assert_eq!(dual.reps().iter().filter(|r| r.is_trivial()).count(), 1);
            homomorphism_and_unitarity(g, &dual);
            distinct_characters(g, &dual);
        }
    }

    #[test]
    fn d4_dual_shape() {
        let dual = unitary_dual(&FiniteGroup::dihedral(4).unwrap()).unwrap();
        let dims: Vec<usize> = dual.reps().iter().map(|r| r.dim()).collect();
        assert_eq!(dims, vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn z4_characters() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let dual = unitary_dual(&g).unwrap();
        let chi1 = dual.reps()[1].character(&g).unwrap();
        let expect = [c(1.0), Complex64::i(), c(-1.0), -Complex64::i()];
        for (a, b) in chi1.iter().zip(expect) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn unsupported_family_is_a_capability_error() {
        let sl = FiniteGroup::special_linear(2, 3).unwrap();
        assert!(matches!(unitary_dual(&sl), Err(Error::Capability(_))));
    }

    #[test]
    fn transform_examples() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let dual = unitary_dual(&z3).unwrap();
        let delta = vec![c(1.0), c(0.0), c(0.0)];
        for r in dual.reps() {
            assert!((fourier_transform(&z3, &delta, r).unwrap()[(0, 0)] - c(1.0)).norm() < 1e-15);
        }
        let f = vec![c(0.5), c(0.5), c(0.0)];
        let omega = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let fh = fourier_transform(&z3, &f, &dual.reps()[1]).unwrap()[(0, 0)];
        assert!((fh - (c(1.0) + omega) / 2.0).norm() < 1e-15);
        assert!((fh.norm() - 0.5).abs() < 1e-15);

        let z2 = FiniteGroup::cyclic(2).unwrap();
        let d2 = unitary_dual(&z2).unwrap();
        let u = vec![c(0.5), c(0.5)];
        assert!(fourier_transform(&z2, &u, &d2.reps()[1]).unwrap()[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn inverse_examples() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let dual = unitary_dual(&z3).unwrap();
        let delta = vec![c(1.0), c(0.0), c(0.0)];
        let back = inverse_transform(&z3, &transform_all(&z3, &delta, &dual).unwrap(), &dual).unwrap();
        for (a, b) in back.iter().zip(&delta) {
            assert!((a - b).norm() < 1e-12);
        }
        let mut blocks: Vec<CMatrix> = dual.reps().iter().map(|r| CMatrix::zeros(r.dim(), r.dim())).collect();
        blocks[0] = CMatrix::identity(1, 1);
        let mean = inverse_transform(&z3, &FourierData { blocks }, &dual).unwrap();
        assert!(mean.iter().all(|v| (v - c(1.0 / 3.0)).norm() < 1e-15));
        assert!(inverse_transform(&z3, &FourierData { blocks: vec![CMatrix::identity(2, 2)] }, &dual).is_err());
    }

    #[test]
    fn round_trip_on_d4() {
        let g = FiniteGroup::dihedral(4).unwrap();
        let dual = unitary_dual(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let f: Vec<Complex64> = (0..8).map(|_| Complex64::new(rng.gen(), rng.gen())).collect();
            let back = inverse_transform(&g, &transform_all(&g, &f, &dual).unwrap(), &dual).unwrap();
            let err: f64 = back.iter().zip(&f).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-10);
        }
    }

    #[test]
    fn uniformity_examples() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let d6 = unitary_dual(&z6).unwrap();
        let u = vec![c(1.0 / 6.0); 6];
        let b = uniformity_bound(&z6, &transform_all(&z6, &u, &d6).unwrap(), &d6).unwrap();
        assert!(b.epsilon < 1e-12 && b.pairwise_bound < 1e-12);

        let z3 = FiniteGroup::cyclic(3).unwrap();
        let d3 = unitary_dual(&z3).unwrap();
        let f = vec![c(0.5), c(0.5), c(0.0)];
        let b = uniformity_bound(&z3, &transform_all(&z3, &f, &d3).unwrap(), &d3).unwrap();
        assert!((b.epsilon - 0.5).abs() < 1e-12);
        assert!((b.per_value_bound.unwrap() - 1.0).abs() < 1e-12);
        assert!(1.0 / 3.0 <= b.pairwise_bound);

        let z2 = FiniteGroup::cyclic(2).unwrap();
        let d2 = unitary_dual(&z2).unwrap();
        let delta = vec![c(1.0), c(0.0)];
        let b = uniformity_bound(&z2, &transform_all(&z2, &delta, &d2).unwrap(), &d2).unwrap();
        assert!((b.epsilon - 1.0).abs() < 1e-12);
        assert_eq!(b.subset_bound(1), Some(2.0));
    }

    #[test]
    fn fourier_json_round_trip() {
        let g = FiniteGroup::dihedral(3).unwrap();
        let dual = unitary_dual(&g).unwrap();
        let f: Vec<Complex64> = (0..6).map(|i| Complex64::new(i as f64, -(i as f64) / 2.0)).collect();
        let data = transform_all(&g, &f, &dual).unwrap();
        let back = FourierData::from_json(&data.to_json()).unwrap();
        assert_eq!(back, data);
    }
}
