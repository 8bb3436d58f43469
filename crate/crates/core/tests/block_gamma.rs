use matgamma_core::block::{ar_product_jordan, delta_jordan, enclose_block_parts, omega, Direction, Route};
use matgamma_core::{CMat, Disc, IntervalMatrix, RMat, C64};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

fn fixture() -> Value {
    serde_json::from_str(include_str!("fixtures/perturbation.json")).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_str().unwrap().parse().unwrap()
}

fn complex(v: &Value) -> C64 {
    C64::new(num(&v[0]), num(&v[1]))
}

/// Decimal reference widened so that it certainly contains the true value.
fn reference(z: C64) -> Disc {
    Disc::new(z, 4.0 * f64::EPSILON * z.norm() + f64::MIN_POSITIVE).unwrap()
}

struct Instance {
    lambda: C64,
    sizes: Vec<usize>,
    radius: RMat,
}

fn instance(case: &Value) -> Instance {
    let sizes: Vec<usize> = case["sizes"].as_array().unwrap().iter().map(|s| s.as_u64().unwrap() as usize).collect();
    let p = sizes.iter().sum();
    let rows = case["radius"].as_array().unwrap();
    Instance { lambda: complex(&case["lambda"]), radius: RMat::from_fn(p, p, |i, j| num(&rows[i][j])), sizes }
}

#[test]
fn omega_dominates_incomplete_gamma_derivative() {
    for pair in fixture()["omega"].as_array().unwrap() {
        let (alpha, want) = (num(&pair[0]), num(&pair[1]));
        let w = omega(alpha).unwrap();
        assert!(w >= want * (1.0 + 4.0 * f64::EPSILON), "alpha = {alpha}: {w} < {want}");
    }
}

#[test]
fn perturbation_bounds_hold() {
    let data = fixture();
    let cases = data["deltas"].as_array().unwrap();
    assert_eq!(cases.len(), 1000);
    let mut checked = 0;
    for case in cases {
        let inst = instance(case);
        let d = delta_jordan(inst.lambda, &inst.sizes, &inst.radius);
        assert!(d.delta().is_some(), "preconditions should hold");
        for (bound, key) in [(d.delta_1, "norm_one"), (d.delta_inf, "norm_inf")] {
            if let Some(bound) = bound {
                let actual = num(&case[key]);
                assert!(actual * (1.0 + 4.0 * f64::EPSILON) < bound, "{key}: {actual} >= {bound}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 1000);
}

#[test]
fn block_enclosures_contain_reference() {
    let data = fixture();
    let mut routes = [0usize; 4];
    let mut failures = 0;
    let cases = data["blocks"].as_array().unwrap();
    for case in cases {
        let inst = instance(case);
        let (g, route) = match enclose_block_parts(inst.lambda, &inst.sizes, &inst.radius) {
            Ok(r) => r,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        routes[match route {
            Route::Scalar => 0,
            Route::Direct => 1,
            Route::Up(_) => 2,
            Route::Down(_) => 3,
        }] += 1;
        let rows = case["gamma"].as_array().unwrap();
        for (i, row) in rows.iter().enumerate() {
            for (j, z) in row.as_array().unwrap().iter().enumerate() {
                let want = reference(complex(z));
                assert!(g.get(i, j).contains_disc(&want), "lambda = {}, route {route:?}, ({i}, {j})", inst.lambda);
            }
        }
    }
    assert!(failures * 20 <= cases.len(), "{failures} failures");
    assert!(routes.iter().all(|&r| r > 0), "routes {routes:?}");
}

fn random_radius(rng: &mut StdRng, p: usize) -> RMat {
    let scale = 10f64.powf(rng.gen_range(-8.0..-2.0));
    RMat::from_fn(p, p, |_, _| scale * rng.gen_range(0.0..1.0))
}

fn random_sizes(rng: &mut StdRng, mut p: usize) -> Vec<usize> {
    let mut sizes = Vec::new();
    while p > 0 {
        let k = rng.gen_range(1..=p);
        sizes.push(k);
        p -= k;
    }
    sizes
}

/// Rigorous enclosure of one member product, factor by factor.
fn member_product(lambda: C64, sizes: &[usize], q: &CMat, shifts: &[i64]) -> IntervalMatrix {
    let p = q.nrows();
    let mut starts = vec![false; p];
    let mut at = 0;
    for &s in sizes {
        for k in 0..s.saturating_sub(1) {
            starts[at + k] = true;
        }
        at += s;
    }
    let mut acc = IntervalMatrix::identity(p);
    for &s in shifts {
        let mut f = IntervalMatrix::zeros(p, p);
        for i in 0..p {
            for j in 0..p {
                let mut d = Disc::point(q[(i, j)]);
                if i == j {
                    d = d + Disc::point(lambda).add_real(s as f64);
                }
                if j == i + 1 && starts[i] {
                    d = d.add_real(1.0);
                }
                f.set(i, j, d);
            }
        }
        acc = f.mul(&acc).unwrap();
    }
    acc
}

#[test]
fn ar_products_contain_sampled_members() {
    let mut rng = StdRng::seed_from_u64(31);
    for _ in 0..100 {
        let p = rng.gen_range(1..=5);
        let sizes = if rng.gen_bool(0.5) { vec![1; p] } else { random_sizes(&mut rng, p) };
        let radius = random_radius(&mut rng, p);
        let lambda = C64::new(rng.gen_range(-4.0..12.0), rng.gen_range(-2.0..2.0));
        let m = rng.gen_range(1..=10);
        for direction in [Direction::Up, Direction::Down] {
            let shifts: Vec<i64> = match direction {
                Direction::Down => (1..=m as i64).map(|i| -i).collect(),
                _ => (0..m as i64).collect(),
            };
            let product = ar_product_jordan(lambda, &sizes, &radius, m, direction).unwrap().enclosure();
            for _ in 0..100 {
                let q = CMat::from_fn(p, p, |i, j| {
                    let r = radius[(i, j)] * rng.gen_range(0.0..1.0f64).sqrt() * (1.0 - 1e-15);
                    C64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
                });
                let member = member_product(lambda, &sizes, &q, &shifts);
                assert!(product.contains(&member), "p = {p}, m = {m}, {direction:?}");
            }
        }
    }
}
