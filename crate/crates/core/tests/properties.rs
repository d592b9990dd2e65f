use contact_index::fock::{quantize, FockBasis};
use contact_index::symbolic::{EnvElement, Monomial};
use contact_index::weyl::{principal_weyl, sharp, SphereGrid, Symplectic, WeylPoly};
use contact_index::{CMatrix, Complex64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// Gaussian-integer coefficients keep the algebraic identities exact in f64.
fn gaussian() -> impl Strategy<Value = Complex64> {
    (-3i32..=3, -3i32..=3).prop_map(|(a, b)| Complex64::new(a as f64, b as f64))
}

fn monomial(n: usize, max_weight: u32) -> impl Strategy<Value = Monomial> {
    (prop::collection::vec(0u32..=3, n), prop::collection::vec(0u32..=3, n), 0u32..=1)
        .prop_filter("weight bound", move |(z, zb, t)| z.iter().sum::<u32>() + zb.iter().sum::<u32>() + 2 * t <= max_weight)
        .prop_map(|(z, zb, t)| Monomial::new(z, zb, t).unwrap())
}

fn coefficient(r: usize, scalar: bool) -> BoxedStrategy<CMatrix> {
    if scalar {
        gaussian().prop_map(move |c| CMatrix::identity(r, r) * c).boxed()
    } else {
        prop::collection::vec(gaussian(), r * r).prop_map(move |v| CMatrix::from_vec(r, r, v)).boxed()
    }
}

fn element(n: usize, r: usize, scalar: bool, max_weight: u32) -> impl Strategy<Value = EnvElement> {
    prop::collection::vec((monomial(n, max_weight), coefficient(r, scalar)), 1..=4)
        .prop_map(move |terms| EnvElement::from_terms(n, r, terms).unwrap())
}

fn pair(scalar: bool, max_weight: u32) -> impl Strategy<Value = (EnvElement, EnvElement)> {
    (1usize..=2, 1usize..=2).prop_flat_map(move |(n, r)| {
        let r = if scalar { 1 } else { r };
        (element(n, r, scalar, max_weight), element(n, r, scalar, max_weight))
    })
}

fn triple() -> impl Strategy<Value = (EnvElement, EnvElement, EnvElement)> {
    (1usize..=2, 1usize..=2).prop_flat_map(|(n, r)| (element(n, r, false, 2), element(n, r, false, 2), element(n, r, false, 2)))
}

fn relative_product_defect(p: &EnvElement, q: &EnvElement, degree: usize) -> f64 {
    let n = p.n();
    let (op, oq) = (p.heisenberg_order() as usize, q.heisenberg_order() as usize);
    let v0 = FockBasis::new(n, degree).unwrap();
    let v1 = FockBasis::new(n, degree + oq).unwrap();
    let v2 = FockBasis::new(n, degree + oq + op).unwrap();
    let pq = quantize(&p.multiply(q).unwrap(), &v0, &v2).unwrap();
    let composed = quantize(p, &v1, &v2).unwrap().mul(&quantize(q, &v0, &v1).unwrap()).unwrap();
    // relative to the largest entry: √-ladder factors make entries grow with degree
    let scale = pq.dense().iter().fold(1.0_f64, |m, z| m.max(z.norm()));
    pq.max_abs_diff(&composed) / scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn op_is_an_involution((p, _) in pair(false, 3)) {
        prop_assert_eq!(p.op_involution().op_involution(), p);
    }

    #[test]
    fn op_reverses_products_of_scalar_elements((p, q) in pair(true, 3)) {
        let lhs = p.multiply(&q).unwrap().op_involution();
        let rhs = q.op_involution().multiply(&p.op_involution()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn op_reverses_words_with_coefficients_in_place((p, q) in pair(false, 3)) {
        let lhs = p.multiply(&q).unwrap().op_involution();
        let rhs = q.op_involution().multiply_coefficients_reversed(&p.op_involution()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn adjoint_is_an_involutive_anti_homomorphism((p, q) in pair(false, 3)) {
        prop_assert_eq!(p.formal_adjoint().formal_adjoint(), p.clone());
        let lhs = p.multiply(&q).unwrap().formal_adjoint();
        let rhs = q.formal_adjoint().multiply(&p.formal_adjoint()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_is_associative((p, q, s) in triple()) {
        let left = p.multiply(&q).unwrap().multiply(&s).unwrap();
        let right = p.multiply(&q.multiply(&s).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn dilations_are_multiplicative((p, q) in pair(false, 3), s in prop::sample::select(vec![0.5, 2.0, 4.0])) {
        let lhs = p.multiply(&q).unwrap().dilate(s).unwrap();
        let rhs = p.dilate(s).unwrap().multiply(&q.dilate(s).unwrap()).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 0.0));
    }

    #[test]
    fn principal_parts_multiply((p, q) in pair(false, 3)) {
        let (a, b) = (p.heisenberg_order(), q.heisenberg_order());
        let lhs = p.multiply(&q).unwrap().principal_part(a + b).unwrap();
        let rhs = p.principal_part(a).unwrap().multiply(&q.principal_part(b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quantization_is_a_homomorphism((p, q) in pair(false, 3), degree in 0usize..=5) {
        let d = relative_product_defect(&p, &q, degree);
        prop_assert!(d <= 1e-12, "defect {d}");
    }

    #[test]
    fn quantization_intertwines_adjoints((p, _) in pair(false, 3), degree in 0usize..=5) {
        let o = p.heisenberg_order() as usize;
        let v0 = FockBasis::new(p.n(), degree).unwrap();
        let v1 = FockBasis::new(p.n(), degree + o).unwrap();
        let v2 = FockBasis::new(p.n(), degree + 2 * o).unwrap();
        // ⟨π(P*)u, v⟩ = ⟨u, π(P)v⟩ for u ∈ V^N, v ∈ V^{N+o}
        let adj = quantize(&p.formal_adjoint(), &v0, &v1).unwrap();
        let dagger = quantize(&p, &v1, &v2).unwrap().adjoint();
        let cols = v0.dim() * p.r();
        let rows = v1.dim() * p.r();
        let d = (adj.dense() - dagger.dense().view((0, 0), (rows, cols))).iter().fold(0.0_f64, |m, z| m.max(z.norm()));
        prop_assert!(d <= 1e-12, "defect {d}");
    }

    #[test]
    fn quantization_is_banded_by_order((p, _) in pair(false, 3), degree in 0usize..=5) {
        let o = p.heisenberg_order() as usize;
        let v0 = FockBasis::new(p.n(), degree).unwrap();
        let v1 = FockBasis::new(p.n(), degree + o).unwrap();
        let max_shift = p.terms().map(|(m, _)| m.degree_shift().unsigned_abs() as usize).max().unwrap_or(0);
        prop_assert!(quantize(&p, &v0, &v1).unwrap().bandwidth() <= max_shift);
        prop_assert!(max_shift <= o);
    }

    #[test]
    fn sharp_identities(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let omega = Symplectic::standard(n);
        let f = WeylPoly::random(n, 3, &mut rng);
        let g = WeylPoly::random(n, 3, &mut rng);
        let h = WeylPoly::random(n, 3, &mut rng);
        let fg = sharp(&f, &g, &omega).unwrap();
        let left = sharp(&fg, &h, &omega).unwrap();
        let right = sharp(&f, &sharp(&g, &h, &omega).unwrap(), &omega).unwrap();
        prop_assert!(left.max_abs_diff(&right) <= 1e-10);
        let one = WeylPoly::constant(n, Complex64::new(1.0, 0.0));
        prop_assert!(sharp(&one, &f, &omega).unwrap().max_abs_diff(&f) <= 1e-10);
        prop_assert!(sharp(&f, &one, &omega).unwrap().max_abs_diff(&f) <= 1e-10);
        prop_assert_eq!(fg.top_part().max_abs_diff(&f.top_part().mul(&g.top_part())), 0.0);
    }

    #[test]
    fn principal_weyl_symbols_multiply(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let omega = Symplectic::standard(1);
        let grid = SphereGrid::new(2, 16).unwrap();
        let f = WeylPoly::random(1, 2, &mut rng);
        let g = WeylPoly::random(1, 3, &mut rng);
        let fg = principal_weyl(&sharp(&f, &g, &omega).unwrap(), &grid);
        let pf = principal_weyl(&f, &grid);
        let pg = principal_weyl(&g, &grid);
        for ((a, b), c) in fg.iter().zip(&pf).zip(&pg) {
            prop_assert!((a - b * c).norm() <= 1e-12);
        }
    }
}
