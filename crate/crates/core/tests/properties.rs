use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use charkummer::blowup::point_blowup_chart;
use charkummer::implicit::{random_parameter_system, solve_implicit_pair};
use charkummer::involution::{Chart, InvolutionData, PointCount, TangentVectorPoint};
use charkummer::kummer::{gf16, run_pipeline, ScenarioCase};
use charkummer::lattice::{dynkin_graph, star_config, CurveConfig, Cycle, Dynkin, QCycle};
use charkummer::localring::{frobenius_power, tjurina_number};
use charkummer::rdp::RdpDatabase;
use charkummer::{Elem, GaloisField, Length, LocalIdeal, Monomial, TruncatedSeries};

fn field(k: u32) -> GaloisField {
    GaloisField::binary(k).unwrap()
}

fn series_strategy(
    nvars: usize,
    max_deg: u32,
    min_deg: u32,
) -> impl Strategy<Value = Vec<(Vec<u32>, u32)>> {
    let term = (proptest::collection::vec(0..=max_deg, nvars), any::<u32>()).prop_filter(
        "degree range",
        move |(e, _)| {
            let d: u32 = e.iter().sum();
            d >= min_deg && d <= max_deg
        },
    );
    proptest::collection::vec(term, 0..6)
}

fn build(f: &GaloisField, vars: &[&str], terms: &[(Vec<u32>, u32)]) -> TruncatedSeries {
    TruncatedSeries::from_terms(
        f,
        vars,
        charkummer::EXACT,
        terms
            .iter()
            .map(|(e, c)| (Monomial::from_exponents(e).unwrap(), Elem(c % f.order()))),
    )
    .unwrap()
}

fn random_data(seed: u64, k: u32) -> InvolutionData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = random_parameter_system(&mut rng, &field(k), 3);
    InvolutionData::new(a, b).unwrap()
}

fn scenario_data() -> Vec<InvolutionData> {
    let f2 = field(1);
    let mut out: Vec<InvolutionData> = [("x", "y"), ("x", "y^2"), ("y", "x^2"), ("x^2", "y^2")]
        .iter()
        .map(|(a, b)| InvolutionData::parse(a, b, &f2).unwrap())
        .collect();
    let f = gf16();
    for q in f.elements() {
        out.push(
            charkummer::kummer::artin_data_for(&ScenarioCase::supersingular(q))
                .unwrap()
                .0,
        );
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms(k in prop::sample::select(vec![1u32, 2, 4]), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = field(k);
        let (a, b, c) = (Elem(a % f.order()), Elem(b % f.order()), Elem(c % f.order()));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
        }
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frobenius_on_series(s in series_strategy(2, 6, 0), t in series_strategy(2, 6, 0)) {
        let f = field(4);
        let (s, t) = (build(&f, &["x", "y"], &s), build(&f, &["x", "y"], &t));
        prop_assert_eq!(s.add(&t).unwrap().pow(2).unwrap(), s.pow(2).unwrap().add(&t.pow(2).unwrap()).unwrap());
    }

    #[test]
    fn substitute_is_functorial(
        s in series_strategy(2, 5, 0),
        p in proptest::collection::vec(series_strategy(2, 3, 1), 2),
        q in proptest::collection::vec(series_strategy(2, 3, 1), 2),
    ) {
        let f = field(2);
        let v = ["x", "y"];
        let n = 8;
        let s = build(&f, &v, &s);
        let phi: Vec<TruncatedSeries> = p.iter().map(|t| build(&f, &v, t).truncate(n)).collect();
        let psi: Vec<TruncatedSeries> = q.iter().map(|t| build(&f, &v, t).truncate(n)).collect();
        let composed: Vec<TruncatedSeries> = phi.iter().map(|t| t.substitute(&psi).unwrap()).collect();
        let lhs = s.substitute(&phi).unwrap().substitute(&psi).unwrap().truncate(n);
        let rhs = s.substitute(&composed).unwrap().truncate(n);
        let shared = lhs.precision().min(rhs.precision());
        prop_assert_eq!(lhs.truncate(shared), rhs.truncate(shared));
    }

    #[test]
    fn length_is_monotone(
        gens in proptest::collection::vec(series_strategy(2, 4, 1), 1..3),
        extra in series_strategy(2, 4, 1),
    ) {
        let f = field(2);
        let v = ["x", "y"];
        let mut i_gens: Vec<TruncatedSeries> = gens.iter().map(|t| build(&f, &v, t)).collect();
        i_gens.extend(frobenius_power(&f, &v, 4, 12).unwrap().generators().iter().cloned());
        let i = LocalIdeal::new(i_gens, 12).unwrap();
        let j = i.extend(&[build(&f, &v, &extra)]).unwrap();
        let (li, lj) = (i.artinian_length().finite().unwrap(), j.artinian_length().finite().unwrap());
        prop_assert!(li >= lj, "{} < {}", li, lj);
    }

    #[test]
    fn nakayama_certificate_is_stable(gens in proptest::collection::vec(series_strategy(3, 4, 1), 2..4)) {
        let f = field(2);
        let v = ["x", "y", "z"];
        let gens: Vec<TruncatedSeries> = gens.iter().map(|t| build(&f, &v, t)).collect();
        let (len, qb) = LocalIdeal::new(gens.clone(), 9).unwrap().length_certified().unwrap();
        if let Some(qb) = qb {
            let again = LocalIdeal::new(gens, qb.degree() + 3).unwrap().artinian_length();
            prop_assert_eq!(again, len);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn implicit_pair_residuals(seed in any::<u64>(), k in prop::sample::select(vec![1u32, 2])) {
        let d = random_data(seed, k);
        let n = 10;
        let c = solve_implicit_pair(d.a(), d.b(), n).unwrap();
        let uv = TruncatedSeries::gens(d.field(), &["u", "v"]).unwrap();
        let rx = c.x.sub(&uv[0].pow(2).unwrap().add(&c.a.mul(&uv[0]).unwrap()).unwrap()).unwrap().truncate(n);
        let ry = c.y.sub(&uv[1].pow(2).unwrap().add(&c.b.mul(&uv[1]).unwrap()).unwrap()).unwrap().truncate(n);
        prop_assert!(rx.is_zero() && ry.is_zero());
        let pa = d.a().substitute(&[c.x.clone(), c.y.clone()]).unwrap().sub(&c.a).unwrap().truncate(n - 1);
        prop_assert!(pa.is_zero());
        prop_assert!(d.verify_invariant_identity(n).unwrap().passes());
    }

    #[test]
    fn charts_of_random_systems(seed in any::<u64>()) {
        let d = random_data(seed, 2);
        for chart in [Chart::A, Chart::B] {
            prop_assert!(d.chart_consistency_check(chart).unwrap().passes());
            let s = d.chart_singularities(chart, 10).unwrap();
            prop_assert_eq!(s.located, d.rational_singular_slopes(chart));
        }
        prop_assert!(d.blowup().unwrap().z_chart_exceptional_empty);
    }

    #[test]
    fn point_count_swap_invariance(seed in any::<u64>()) {
        let d = random_data(seed, 2);
        prop_assert_eq!(d.count_singular_chart_points(), d.swapped().unwrap().count_singular_chart_points());
    }

    #[test]
    fn embedded_iff_nonnormal(
        a in series_strategy(2, 3, 1),
        b in series_strategy(2, 3, 1),
        square in any::<bool>(),
    ) {
        let f = field(2);
        let v = ["x", "y"];
        let (mut a, mut b) = (build(&f, &v, &a), build(&f, &v, &b));
        if square {
            a = a.pow(2).unwrap().truncate(8);
            b = b.pow(2).unwrap().truncate(8);
        }
        let pure = |s: &TruncatedSeries, var: &str| s.add(&TruncatedSeries::parse(var, &f, &v).unwrap().pow(if square { 2 } else { 1 }).unwrap()).unwrap();
        let Ok(d) = InvolutionData::new(pure(&a, "x"), pure(&b, "y")) else { return Ok(()) };
        let embedded = d.has_embedded_component(10).unwrap().embedded;
        prop_assert_eq!(embedded, d.count_singular_chart_points() == PointCount::NonNormal);
    }

    #[test]
    fn tjurina_invariant_under_linear_changes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = field(2);
        let v = ["x", "y", "z"];
        let gens = TruncatedSeries::gens(&f, &v).unwrap();
        let g = TruncatedSeries::parse("z^2 + x*y", &f, &v).unwrap();
        let images = loop {
            let m: Vec<Vec<u32>> = (0..3).map(|_| (0..3).map(|_| rand::Rng::gen_range(&mut rng, 0..f.order())).collect()).collect();
            let det = {
                let e = |i: usize, j: usize| Elem(m[i][j]);
                let t = |a: Elem, b: Elem, c: Elem| f.mul(f.mul(a, b), c);
                let pos = f.add(f.add(t(e(0,0), e(1,1), e(2,2)), t(e(0,1), e(1,2), e(2,0))), t(e(0,2), e(1,0), e(2,1)));
                let neg = f.add(f.add(t(e(0,2), e(1,1), e(2,0)), t(e(0,0), e(1,2), e(2,1))), t(e(0,1), e(1,0), e(2,2)));
                f.sub(pos, neg)
            };
            if !det.is_zero() {
                break (0..3)
                    .map(|i| {
                        (0..3).fold(g.zero_like(charkummer::EXACT), |acc, j| acc.add(&gens[j].scale(Elem(m[i][j]))).unwrap())
                    })
                    .collect::<Vec<_>>();
            }
        };
        let moved = g.substitute(&images).unwrap();
        prop_assert_eq!(tjurina_number(&moved, 12).unwrap(), Length::Finite(2));
    }
}

#[test]
fn frobenius_on_all_elements() {
    for k in [1, 2, 4] {
        let f = field(k);
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.pow(f.add(a, b), 2), f.add(f.pow(a, 2), f.pow(b, 2)));
            }
        }
    }
}

#[test]
fn length_of_maximal_ideal_powers() {
    let f = field(1);
    let v = ["x", "y"];
    for k in 1..=5u32 {
        // (x, y)^k is generated by the monomials of degree k
        let gens: Vec<TruncatedSeries> = (0..=k)
            .map(|i| {
                TruncatedSeries::from_terms(
                    &f,
                    &v,
                    charkummer::EXACT,
                    [(Monomial::from_exponents(&[i, k - i]).unwrap(), Elem::ONE)],
                )
                .unwrap()
            })
            .collect();
        let below: usize = (0..k).map(|d| d as usize + 1).sum();
        assert_eq!(
            LocalIdeal::new(gens, 12).unwrap().artinian_length(),
            Length::Finite(below)
        );
        assert_eq!(below, (k * (k + 1) / 2) as usize);
    }
}

#[test]
fn scenario_identities_and_charts() {
    for d in scenario_data() {
        assert!(d.verify_invariant_identity(10).unwrap().passes());
        if d.count_singular_chart_points() != PointCount::NonNormal {
            for chart in [Chart::A, Chart::B] {
                assert!(d.chart_consistency_check(chart).unwrap().passes());
            }
        }
        assert!(d.blowup().unwrap().z_chart_exceptional_empty);
        assert_eq!(
            d.has_embedded_component(12).unwrap().embedded,
            d.count_singular_chart_points() == PointCount::NonNormal
        );
    }
}

#[test]
fn tangent_image_is_linear() {
    let d = InvolutionData::parse("x^2", "y^2", &field(2)).unwrap();
    let f = d.field().clone();
    for l in f.elements() {
        let pt = TangentVectorPoint {
            chart: Chart::A,
            slope: l,
        };
        let table = d.tangent_table(pt).unwrap();
        assert_eq!(table.len(), 3);
        for (p1, r1) in &table {
            for (p2, r2) in &table {
                for c in f.elements() {
                    let psi: Vec<Elem> = (0..4).map(|i| f.add(p1[i], f.mul(c, p2[i]))).collect();
                    let got = d
                        .tangent_image(pt, [psi[0], psi[1], psi[2], psi[3]])
                        .unwrap()
                        .flatten();
                    let want: Vec<Elem> = r1
                        .flatten()
                        .iter()
                        .zip(r2.flatten())
                        .map(|(&a, b)| f.add(a, f.mul(c, b)))
                        .collect();
                    assert_eq!(got, want);
                }
            }
        }
    }
}

#[test]
fn point_blowup_multiplicity_is_chart_independent() {
    let f = field(1);
    let v = ["x", "y", "z"];
    let inputs = [
        "z^2 + x*y",
        "z^3 + x*y",
        "z^2 + x^2 + y^3",
        "z^2 + x*y*z + x*y^2 + x^2*y",
        "z^2 + y*x^2*z + x^5 + y^3",
        "z^2 + x^2*y^2*z + x*y^4 + y*x^4",
        "x^3 + y^3 + z^3",
        "z^4 + x*y",
        "z^2 + x^2*y + x*y^3",
        "x*y*z + x^4 + y^4 + z^4",
    ];
    for s in inputs {
        let g = TruncatedSeries::parse(s, &f, &v).unwrap();
        let ms: Vec<u32> = v
            .iter()
            .map(|c| point_blowup_chart(&g, c).unwrap().multiplicity)
            .collect();
        assert!(ms.iter().all(|&m| m == ms[0]), "{s}: {ms:?}");
        assert_eq!(ms[0], g.order().unwrap());
    }
}

fn lattice_configs() -> Vec<CurveConfig> {
    let star = star_config();
    let twice = star
        .point_blowup(&[(1, 1)], "C6")
        .unwrap()
        .point_blowup(&[(5, 1)], "C7")
        .unwrap();
    vec![
        star,
        twice.induced(&[0, 1, 2, 3, 4, 5]),
        dynkin_graph(Dynkin::E(6)).unwrap(),
        dynkin_graph(Dynkin::D(5)).unwrap(),
        dynkin_graph(Dynkin::A(4)).unwrap(),
    ]
}

/// All cycles with coefficients in `1..=bound`, smallest first.
fn brute_force_fundamental(c: &CurveConfig, bound: i64) -> Option<Cycle> {
    let n = c.len();
    let mut best: Option<Cycle> = None;
    let mut z = vec![1i64; n];
    loop {
        let cyc = Cycle(z.clone());
        if (0..n).all(|j| c.pairing(&cyc, j) <= 0) {
            let smaller = best
                .as_ref()
                .map_or(true, |b| b.0.iter().zip(&z).all(|(x, y)| y <= x));
            if smaller {
                best = Some(cyc);
            }
        }
        let mut i = 0;
        while i < n && z[i] == bound {
            z[i] = 1;
            i += 1;
        }
        if i == n {
            return best;
        }
        z[i] += 1;
    }
}

#[test]
fn fundamental_cycles_are_minimal() {
    for c in lattice_configs() {
        let z = c.fundamental_cycle().unwrap();
        assert!(z.0.iter().all(|&x| x >= 1));
        assert!((0..c.len()).all(|j| c.pairing(&z, j) <= 0));
        let bound = z.0.iter().max().unwrap() + 1;
        assert_eq!(brute_force_fundamental(&c, bound), Some(z));
    }
}

#[test]
fn laufer_order_independence() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for c in lattice_configs().into_iter().take(2) {
        let z = c.fundamental_cycle().unwrap();
        let mut order: Vec<usize> = (0..c.len()).collect();
        for _ in 0..100 {
            order.shuffle(&mut rng);
            assert_eq!(c.fundamental_cycle_in_order(&order).unwrap(), z);
        }
    }
}

#[test]
fn canonical_cycle_solves_adjunction() {
    use num_rational::BigRational;
    for c in lattice_configs() {
        let k = c.canonical_cycle().unwrap();
        let m = c.matrix();
        for i in 0..c.len() {
            let lhs: BigRational = (0..c.len())
                .map(|j| BigRational::from_integer(m[i][j].into()) * &k.0[j])
                .sum();
            assert_eq!(
                lhs,
                BigRational::from_integer((-c.self_int[i] - 2 * c.chi[i]).into())
            );
        }
    }
}

#[test]
fn cartier_solutions_are_linear() {
    use num_rational::BigRational;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for c in lattice_configs() {
        for _ in 0..10 {
            let b: Vec<i64> = (0..c.len())
                .map(|_| rand::Rng::gen_range(&mut rng, -3..=3))
                .collect();
            let b2: Vec<i64> = b.iter().map(|x| 2 * x).collect();
            let s = c.numerically_cartier(&b).unwrap().solution;
            let s2 = c.numerically_cartier(&b2).unwrap().solution;
            let two = BigRational::from_integer(2.into());
            assert_eq!(QCycle(s.0.iter().map(|x| x * &two).collect()), s2);
        }
    }
}

#[test]
fn dynkin_recognition_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut types: Vec<Dynkin> = (1..=12).map(Dynkin::A).collect();
    types.extend((4..=12).map(Dynkin::D));
    types.extend((6..=8).map(Dynkin::E));
    for t in types {
        let g = dynkin_graph(t).unwrap();
        let mut perm: Vec<usize> = (0..g.len()).collect();
        for _ in 0..20 {
            perm.shuffle(&mut rng);
            assert_eq!(g.permuted(&perm).dynkin_recognize(), Some(t));
        }
    }
}

#[test]
fn point_blowup_round_trip() {
    for c in lattice_configs() {
        for i in 0..c.len() {
            let b = c.point_blowup(&[(i, 1)], "new").unwrap();
            let back = b.induced(&(0..c.len()).collect::<Vec<_>>());
            let mut restored = back.clone();
            restored.self_int[i] += 1;
            restored.labels = c.labels.clone();
            assert_eq!(restored, c);
        }
        for i in 0..c.len() {
            for j in 0..i {
                if c.mult[i][j] == 0 {
                    continue;
                }
                let b = c.point_blowup(&[(i, 1), (j, 1)], "new").unwrap();
                let mut back = b.induced(&(0..c.len()).collect::<Vec<_>>());
                back.self_int[i] += 1;
                back.self_int[j] += 1;
                back.set_mult(i, j, back.mult[i][j] + 1);
                assert_eq!(back, c);
            }
        }
    }
}

#[test]
fn nonnormal_iff_superspecial() {
    let db = RdpDatabase::builtin().unwrap();
    let f = gf16();
    for q in f.elements() {
        let r = run_pipeline(&ScenarioCase::supersingular(q), &db, 12).unwrap();
        assert_eq!(r.point_count == PointCount::NonNormal, f.pow(q, 4) == q);
        assert!(r.passes(), "{r}");
        let again = run_pipeline(&ScenarioCase::supersingular(q), &db, 12).unwrap();
        assert_eq!(again.to_string(), r.to_string());
    }
}

#[test]
fn katsura_reduces_for_every_parameter() {
    let f = gf16();
    for q in f.elements() {
        let r = charkummer::kummer::katsura_to_artin_check(q, 10).unwrap();
        assert!(r.passes(), "q = {}", f.format(q));
    }
}
