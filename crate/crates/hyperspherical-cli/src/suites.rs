//! Verification suites behind `hsph verify --suite <name>`: randomized
//! spot checks of the identity families, reported one line per check.

use crate::{CliError, Format};
use hyperspherical::cg::{
    cg_su2, cg_su2_ladder_oracle, check_recurrence_l_shift, check_recurrence_same_order, CgTable,
    ShiftKind,
};
use hyperspherical::funcs::{diag_z_appell, hyper_m, hyper_z, rep_matrix, AppellVariant};
use hyperspherical::group::{compose_euler, euler_to_group, ComplexEulerAngles};
use hyperspherical::halfint::HalfInt;
use hyperspherical::harmonic::{plancherel_check, vilenkin_forward, vilenkin_inverse};
use hyperspherical::lie::{casimir_matrices, casimir_residual, check_commutators};
use hyperspherical::oracle::{hyper_z_integral, su2_t_integral, QuadratureSpec};
use hyperspherical::special::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::f64::consts::PI;

struct Check {
    name: String,
    worst: f64,
    tol: f64,
}

impl Check {
    fn pass(&self) -> bool {
        self.worst <= self.tol
    }
}

fn h(t: i64) -> HalfInt {
    HalfInt::from_twice(t)
}

fn random_angles(rng: &mut ChaCha8Rng, imag: f64) -> ComplexEulerAngles {
    ComplexEulerAngles::new(
        rng.gen_range(0.0..2.0 * PI),
        rng.gen_range(-imag..imag),
        rng.gen_range(0.1..PI - 0.1),
        rng.gen_range(-imag..imag),
        rng.gen_range(-2.0 * PI..2.0 * PI),
        rng.gen_range(-imag..imag),
    )
}

pub fn cmd_verify(
    format: Format,
    suite: &str,
    samples: usize,
    seed: u64,
    tol_override: Option<f64>,
) -> Result<(), CliError> {
    let names: Vec<&str> = if suite == "all" {
        vec![
            "symmetry",
            "homomorphism",
            "addition",
            "recurrence",
            "casimir",
            "appell",
            "integral",
            "cg",
            "commutators",
            "plancherel",
        ]
    } else {
        vec![suite]
    };
    let mut checks = Vec::new();
    for name in names {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let suite_checks = match name {
            "symmetry" => symmetry(&mut rng, samples),
            "homomorphism" => homomorphism(&mut rng, samples),
            "addition" => addition(&mut rng, samples),
            "recurrence" => recurrence(&mut rng, samples),
            "casimir" => casimir(&mut rng, samples),
            "appell" => appell(&mut rng, samples),
            "integral" => integral(&mut rng, samples),
            "cg" => cg_suite(),
            "commutators" => commutators(),
            "plancherel" => plancherel(),
            other => {
                return Err(CliError::Domain(format!("unknown suite `{other}`")));
            }
        };
        checks.extend(suite_checks);
    }
    if let Some(t) = tol_override {
        for c in checks.iter_mut() {
            c.tol = t;
        }
    }
    let all_pass = checks.iter().all(Check::pass);
    match format {
        Format::Json => {
            let rows: Vec<_> = checks
                .iter()
                .map(|c| json!({"check": c.name, "worst": c.worst, "tol": c.tol, "pass": c.pass()}))
                .collect();
            let record = json!({
                "command": "verify",
                "inputs": {"suite": suite, "samples": samples, "seed": seed},
                "outputs": {"checks": rows},
                "pass": all_pass,
            });
            println!("{}", serde_json::to_string_pretty(&record).unwrap());
        }
        _ => {
            for c in &checks {
                println!(
                    "{} {:<38} worst {:9.3e}  tol {:8.1e}",
                    if c.pass() { "PASS" } else { "FAIL" },
                    c.name,
                    c.worst,
                    c.tol
                );
            }
            println!(
                "suite {}: {}",
                suite,
                if all_pass { "PASS" } else { "FAIL" }
            );
        }
    }
    if all_pass {
        Ok(())
    } else {
        Err(CliError::Verification)
    }
}

fn symmetry(rng: &mut ChaCha8Rng, samples: usize) -> Vec<Check> {
    let mut worst_neg = 0.0f64;
    let mut worst_swap = 0.0f64;
    for _ in 0..samples {
        let theta = rng.gen_range(0.0..PI);
        let tau = rng.gen_range(-2.0..2.0);
        for twice_l in 0..=6 {
            let l = h(twice_l);
            for m in HalfInt::weights(l) {
                for n in HalfInt::weights(l) {
                    let z = hyper_z(l, m, n, theta, tau).unwrap();
                    worst_neg = worst_neg.max((z - hyper_z(l, -m, -n, theta, tau).unwrap()).norm());
                    worst_swap = worst_swap.max((z - hyper_z(l, n, m, theta, tau).unwrap()).norm());
                }
            }
        }
    }
    vec![
        Check {
            name: "Z(m,n) = Z(-m,-n)".into(),
            worst: worst_neg,
            tol: 1e-11,
        },
        Check {
            name: "Z(m,n) = Z(n,m)".into(),
            worst: worst_swap,
            tol: 1e-11,
        },
    ]
}

fn homomorphism(rng: &mut ChaCha8Rng, samples: usize) -> Vec<Check> {
    let mut worst = 0.0f64;
    for twice_l in [1, 2, 3, 4] {
        let l = h(twice_l);
        for _ in 0..samples {
            let a1 = random_angles(rng, 1.5);
            let a2 = random_angles(rng, 1.5);
            let prod = compose_euler(&a1, &a2).angles;
            let lhs = rep_matrix(l, &prod).unwrap();
            let rhs = rep_matrix(l, &a1)
                .unwrap()
                .mul(&rep_matrix(l, &a2).unwrap());
            worst = worst.max(lhs.max_entry_distance(&rhs));
        }
    }
    vec![Check {
        name: "T_l(g1 g2) = T_l(g1) T_l(g2)".into(),
        worst,
        tol: 1e-8,
    }]
}

fn addition(rng: &mut ChaCha8Rng, samples: usize) -> Vec<Check> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let a1 = ComplexEulerAngles::new(
            0.0,
            0.0,
            rng.gen_range(0.2..PI - 0.2),
            rng.gen_range(-1.0..1.0),
            0.0,
            0.0,
        );
        let a2 = ComplexEulerAngles::new(
            rng.gen_range(0.0..2.0 * PI),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(0.2..PI - 0.2),
            rng.gen_range(-1.0..1.0),
            0.0,
            0.0,
        );
        let prod = compose_euler(&a1, &a2).angles;
        for twice_l in [1, 2, 4] {
            let l = h(twice_l);
            for m in HalfInt::weights(l) {
                for n in HalfInt::weights(l) {
                    let lhs = hyper_m(l, m, n, &prod).unwrap();
                    let mut rhs = C64::new(0.0, 0.0);
                    for k in HalfInt::weights(l) {
                        rhs += hyper_m(l, m, k, &a1).unwrap() * hyper_m(l, k, n, &a2).unwrap();
                    }
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
    }
    vec![Check {
        name: "addition theorem".into(),
        worst,
        tol: 1e-8,
    }]
}

fn recurrence(rng: &mut ChaCha8Rng, samples: usize) -> Vec<Check> {
    let mut worst_same = 0.0f64;
    let mut worst_shift = 0.0f64;
    for _ in 0..samples {
        let theta = rng.gen_range(0.5..2.5);
        let tau = rng.gen_range(0.3..1.2);
        let l = h([2, 3, 4][rng.gen_range(0..3)]);
        let weights: Vec<HalfInt> = HalfInt::weights(l).collect();
        let m = weights[rng.gen_range(0..weights.len())];
        let n = weights[rng.gen_range(0..weights.len())];
        for r in check_recurrence_same_order(l, m, n, theta, tau, 1e-4).unwrap() {
            worst_same = worst_same.max(r.residual);
        }
        let a = random_angles(rng, 0.8);
        for (kind, l1, l2) in [
            (ShiftKind::Vector, HalfInt::ONE, HalfInt::ONE),
            (ShiftKind::Spinor, HalfInt::HALF, h(3)),
        ] {
            let cw: Vec<HalfInt> = HalfInt::weights(l1 + l2).collect();
            let j = cw[rng.gen_range(0..cw.len())];
            let mm = cw[rng.gen_range(0..cw.len())];
            for r in check_recurrence_l_shift(kind, l2, j, mm, &a).unwrap() {
                worst_shift = worst_shift.max(r.residual);
            }
        }
    }
    vec![
        Check {
            name: "same-order recurrences".into(),
            worst: worst_same,
            tol: 1e-4,
        },
        Check {
            name: "weight-shift recurrences".into(),
            worst: worst_shift,
            tol: 1e-8,
        },
    ]
}

fn casimir(rng: &mut ChaCha8Rng, samples: usize) -> Vec<Check> {
    let mut worst_matrix = 0.0f64;
    for tl in 0..=4i64 {
        for td in 0..=4i64 {
            let (l, ld) = (h(tl), h(td));
            let (x2, y2) = casimir_matrices(l, ld);
            let lx = l.as_f64() * (l.as_f64() + 1.0);
            let ly = ld.as_f64() * (ld.as_f64() + 1.0);
            worst_matrix = worst_matrix
                .max(x2.distance_from_scalar(C64::new(lx, 0.0)))
                .max(y2.distance_from_scalar(C64::new(ly, 0.0)));
        }
    }
    let mut worst_residual = 0.0f64;
    for _ in 0..samples.min(10) {
        let a = ComplexEulerAngles::new(
            rng.gen_range(0.0..2.0 * PI),
            rng.gen_range(-0.5..0.5),
            rng.gen_range(0.5..2.5),
            rng.gen_range(0.3..1.5),
            rng.gen_range(-2.0 * PI..2.0 * PI),
            rng.gen_range(-0.5..0.5),
        );
        let l = h([2, 3, 4][rng.gen_range(0..3)]);
        let weights: Vec<HalfInt> = HalfInt::weights(l).collect();
        let m = weights[rng.gen_range(0..weights.len())];
        let n = weights[rng.gen_range(0..weights.len())];
        worst_residual = worst_residual.max(casimir_residual(l, m, n, &a, 1e-3).unwrap());
    }
    vec![
        Check {
            name: "Casimir matrices l(l+1) I".into(),
            worst: worst_matrix,
            tol: 1e-11,
        },
        Check {
            name: "Casimir eigen-equation residual".into(),
            worst: worst_residual,
            tol: 1e-4,
        },
    ]
}

fn appell(rng: &mut ChaCha8Rng, samples: usize) -> Vec<Check> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let theta = rng.gen_range(0.05..0.5);
        let tau = rng.gen_range(0.05..0.5);
        for twice_l in [1, 2, 3, 4] {
            let l = h(twice_l);
            for m in HalfInt::weights(l) {
                let direct = hyper_z(l, m, m, theta, tau).unwrap();
                for variant in [AppellVariant::F4, AppellVariant::F2] {
                    let ap = diag_z_appell(l, m, theta, tau, variant, 1e-13).unwrap();
                    worst = worst.max((direct - ap.value).norm());
                }
            }
        }
    }
    vec![Check {
        name: "Appell F4/F2 diagonal decompositions".into(),
        worst,
        tol: 1e-8,
    }]
}

fn integral(rng: &mut ChaCha8Rng, samples: usize) -> Vec<Check> {
    let mut worst_z = 0.0f64;
    let mut worst_u = 0.0f64;
    for _ in 0..samples {
        let theta = rng.gen_range(0.0..PI);
        let tau = rng.gen_range(-2.0..2.0);
        for twice_l in [1, 2, 4, 6] {
            let l = h(twice_l);
            for m in HalfInt::weights(l) {
                for n in HalfInt::weights(l) {
                    let series = hyper_z(l, m, n, theta, tau).unwrap();
                    let quad = hyper_z_integral(l, m, n, theta, tau, 256).unwrap();
                    worst_z = worst_z.max((series - quad).norm());
                }
            }
        }
        let a = ComplexEulerAngles::new(
            rng.gen_range(0.0..2.0 * PI),
            0.0,
            rng.gen_range(0.1..PI - 0.1),
            0.0,
            rng.gen_range(-2.0 * PI..2.0 * PI),
            0.0,
        );
        let u = euler_to_group(&a);
        for twice_l in [1, 2] {
            let l = h(twice_l);
            for m in HalfInt::weights(l) {
                for n in HalfInt::weights(l) {
                    let from_integral = su2_t_integral(l, m, n, &u, 256).unwrap();
                    let from_series = hyper_m(l, m, n, &a).unwrap();
                    worst_u = worst_u.max((from_integral - from_series).norm());
                }
            }
        }
    }
    vec![
        Check {
            name: "Z integral representation".into(),
            worst: worst_z,
            tol: 1e-9,
        },
        Check {
            name: "SU(2) integral representation".into(),
            worst: worst_u,
            tol: 1e-10,
        },
    ]
}

fn cg_suite() -> Vec<Check> {
    let mut worst_orth = 0.0f64;
    for t1 in 1..=4i64 {
        for t2 in 1..=t1 {
            worst_orth = worst_orth.max(CgTable::new(h(t1), h(t2)).orthogonality_defect());
        }
    }
    let mut worst_oracle = 0.0f64;
    for t1 in 1..=3i64 {
        for t2 in 1..=3i64 {
            let (l1, l2) = (h(t1), h(t2));
            let oracle = cg_su2_ladder_oracle(l1, l2);
            for l in HalfInt::range_inclusive((l1 - l2).abs(), l1 + l2) {
                for m1 in HalfInt::weights(l1) {
                    for m2 in HalfInt::weights(l2) {
                        if (m1 + m2).abs() <= l {
                            worst_oracle = worst_oracle
                                .max((cg_su2(l1, l2, l, m1, m2) - oracle.get(l, m1, m2)).abs());
                        }
                    }
                }
            }
        }
    }
    vec![
        Check {
            name: "CG orthogonality".into(),
            worst: worst_orth,
            tol: 1e-12,
        },
        Check {
            name: "CG vs ladder oracle".into(),
            worst: worst_oracle,
            tol: 1e-10,
        },
    ]
}

fn commutators() -> Vec<Check> {
    let mut worst = 0.0f64;
    for tl in 0..=4i64 {
        for td in 0..=4i64 {
            let rep = check_commutators(h(tl), h(td));
            worst = worst
                .max(rep.max_residual_rot_boost)
                .max(rep.max_residual_xy);
        }
    }
    vec![Check {
        name: "rotation/boost and su(2)xsu(2) commutators".into(),
        worst,
        tol: 1e-12,
    }]
}

fn plancherel() -> Vec<Check> {
    let f = |x: f64| C64::new((1.0 - x).exp(), 0.0);
    let grid: Vec<f64> = (0..400).map(|i| 20.0 * i as f64 / 399.0).collect();
    let quad = QuadratureSpec::gauss_legendre(0.0, 4.5, 256);
    let spec = vilenkin_forward(f, h(0), h(0), &grid, &[], &quad).unwrap();
    let probes = [1.2, 1.5, 3.0];
    let chats: Vec<f64> = probes
        .iter()
        .map(|&x| (f(x) / vilenkin_inverse(&spec, x).unwrap()).re)
        .collect();
    let chat = chats.iter().sum::<f64>() / chats.len() as f64;
    let chat_spread = chats
        .iter()
        .map(|c| (c - chat).abs() / chat.abs())
        .fold(0.0f64, f64::max);
    let mut worst_rec = 0.0f64;
    for &x in &probes {
        let rec = vilenkin_inverse(&spec, x).unwrap() * chat;
        worst_rec = worst_rec.max((rec - f(x)).norm() / f(x).norm());
    }
    let (lhs, rhs) = plancherel_check(f, h(0), h(0), &grid, &quad).unwrap();
    let gap = (lhs - chat * rhs).abs() / lhs;
    vec![
        Check {
            name: "transform round trip (normalized)".into(),
            worst: worst_rec,
            tol: 1e-3,
        },
        Check {
            name: "normalization constant stability".into(),
            worst: chat_spread,
            tol: 1e-3,
        },
        Check {
            name: "Plancherel identity gap".into(),
            worst: gap,
            tol: 1e-3,
        },
    ]
}
