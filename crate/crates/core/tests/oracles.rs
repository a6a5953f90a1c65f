//! Independent brute-force oracles checked against the library.

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chaintwist::curves::{
    bigon_scan, build_chain_system, build_chain_system_with, chain_system_per_vertex,
    check_filling, trace_faces, Crossing, CurveRoute, DartLabel, EmbeddedCurveSystem, Handedness,
};
use chaintwist::homology::{mapping_torus_h1, surgered_h1, FramingConvention};
use chaintwist::linalg::{invariant_factors, AbelianGroupInvariant, IntMatrix};
use chaintwist::surgery::Slope;
use chaintwist::words::{build_monodromy, FamilyParams, SurfaceSpec, TwistWord};

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors as ratios of determinantal divisors (gcds of k×k minors).
fn determinantal_factors(m: &[Vec<i128>]) -> Vec<i128> {
    let (rows, cols) = (m.len(), m[0].len());
    let mut prev = 1i128;
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut d = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| m[r][c]).collect())
                    .collect();
                d = d.gcd(&det(&minor));
            }
        }
        if d == 0 {
            break;
        }
        out.push(d / prev);
        prev = d;
    }
    out
}

#[test]
fn smith_form_matches_determinantal_divisors() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..400 {
        let rows = rng.gen_range(1..=4);
        let cols = rng.gen_range(1..=4);
        let spread = rng.gen_range(1..=9);
        let m: Vec<Vec<i128>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-spread..=spread)).collect())
            .collect();
        let as_i64: Vec<Vec<i64>> = m
            .iter()
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect();
        let got = invariant_factors(&IntMatrix::from_rows(&as_i64));
        let want: Vec<BigInt> = determinantal_factors(&m)
            .into_iter()
            .map(BigInt::from)
            .collect();
        assert_eq!(got, want, "{m:?}");
    }
}

#[test]
fn handedness_brute_force() {
    for g in 2..=4u32 {
        let indices: Vec<u32> = (1..=2 * g + 1).collect();
        let v = 2 * g as usize;
        let target = 2 - 2 * i64::from(g);
        let mut good = 0;
        for mask in 0u32..(1 << v) {
            let hand: Vec<Handedness> = (0..v)
                .map(|k| {
                    if mask >> k & 1 == 0 {
                        Handedness::Canonical
                    } else {
                        Handedness::Mirrored
                    }
                })
                .collect();
            let sys = chain_system_per_vertex(g, &indices, &hand).unwrap();
            if trace_faces(&sys).unwrap().euler == target {
                good += 1;
            }
        }
        // A chain graph is a tree of curves: reversing the curves past any
        // vertex flips that vertex alone, so every choice embeds alike.
        assert_eq!(good, 1 << v, "g={g}");
        for h in [Handedness::Canonical, Handedness::Mirrored] {
            let r = trace_faces(&build_chain_system_with(g, &indices, h).unwrap()).unwrap();
            assert_eq!((r.euler, r.faces, r.handedness), (target, 2, Some(h)));
        }
    }
}

#[test]
fn chain_filling_for_every_genus() {
    for g in 2..=8u32 {
        let half: Vec<u32> = (1..=2 * g).collect();
        let full: Vec<u32> = (1..=2 * g + 1).collect();
        let f = check_filling(&build_chain_system(g, &half).unwrap());
        assert_eq!((f.fills, f.disk_count), (true, Some(1)));
        let f = check_filling(&build_chain_system(g, &full).unwrap());
        assert_eq!((f.fills, f.disk_count), (true, Some(2)));
        for drop in 2..2 * g {
            let rest: Vec<u32> = half.iter().copied().filter(|&i| i != drop).collect();
            let sys = build_chain_system(g, &rest).unwrap();
            assert!(
                !trace_faces(&sys).unwrap().connected,
                "g={g} without a{drop}"
            );
            assert!(!check_filling(&sys).fills);
        }
    }
}

#[test]
fn face_counts_are_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let g = rng.gen_range(1..=5u32);
        let indices: Vec<u32> = (1..=2 * g + 1).filter(|_| rng.gen_bool(0.6)).collect();
        if indices.is_empty() {
            continue;
        }
        let sys = build_chain_system(g, &indices).unwrap();
        let v = sys.vertex_count();
        assert_eq!(sys.edge_count(), 2 * v);
        for (i, &a) in sys.curves().iter().enumerate() {
            for &b in &sys.curves()[i + 1..] {
                assert_eq!(sys.crossings_between(a, b), a.intersection(b) as usize);
            }
        }
        if v == 0 {
            assert!(trace_faces(&sys).is_err());
            assert!(!check_filling(&sys).fills);
            continue;
        }
        let r = trace_faces(&sys).unwrap();
        assert_eq!(r.sizes.iter().sum::<usize>(), 4 * v);
        assert!(bigon_scan(&sys).is_empty());
    }
}

/// Two crossings of a1 and a2 with opposite handedness, plus a third curve
/// through both of them so that exactly one of the four lunes survives.
fn doubled_crossing() -> EmbeddedCurveSystem {
    let s = SurfaceSpec::closed(2).unwrap();
    let (a1, a2, a3) = (
        s.curve(1).unwrap(),
        s.curve(2).unwrap(),
        s.curve(3).unwrap(),
    );
    let canonical = |x, y| {
        [
            DartLabel::out(x),
            DartLabel::out(y),
            DartLabel::inn(x),
            DartLabel::inn(y),
        ]
    };
    let mirrored = |x, y| {
        [
            DartLabel::out(x),
            DartLabel::inn(y),
            DartLabel::inn(x),
            DartLabel::out(y),
        ]
    };
    let vertices = vec![
        Crossing {
            curves: (a1, a2),
            rotation: canonical(a1, a2),
        },
        Crossing {
            curves: (a1, a2),
            rotation: mirrored(a1, a2),
        },
        Crossing {
            curves: (a2, a3),
            rotation: mirrored(a2, a3),
        },
        Crossing {
            curves: (a1, a3),
            rotation: mirrored(a1, a3),
        },
    ];
    let routes = vec![
        CurveRoute {
            curve: a1,
            visits: vec![0, 3, 1],
        },
        CurveRoute {
            curve: a2,
            visits: vec![0, 1, 2],
        },
        CurveRoute {
            curve: a3,
            visits: vec![2, 3],
        },
    ];
    EmbeddedCurveSystem::new(s, routes, vertices).unwrap()
}

#[test]
fn doubled_crossing_has_one_bigon() {
    let sys = doubled_crossing();
    let bigons = bigon_scan(&sys);
    assert_eq!(bigons.len(), 1);
    let mut corners = bigons[0].corners;
    corners.sort();
    assert_eq!(corners, [0, 1]);
    let r = trace_faces(&sys).unwrap();
    assert_eq!((r.sizes.clone(), r.euler), (vec![14, 2], -2));
}

#[test]
fn lone_doubled_crossing_variants() {
    let s = SurfaceSpec::closed(1).unwrap();
    let (a1, a2) = (s.curve(1).unwrap(), s.curve(2).unwrap());
    let canonical = [
        DartLabel::out(a1),
        DartLabel::out(a2),
        DartLabel::inn(a1),
        DartLabel::inn(a2),
    ];
    let mirrored = [
        DartLabel::out(a1),
        DartLabel::inn(a2),
        DartLabel::inn(a1),
        DartLabel::out(a2),
    ];
    let routes = vec![
        CurveRoute {
            curve: a1,
            visits: vec![0, 1],
        },
        CurveRoute {
            curve: a2,
            visits: vec![0, 1],
        },
    ];
    let build = |second| {
        EmbeddedCurveSystem::new(
            s,
            routes.clone(),
            vec![
                Crossing {
                    curves: (a1, a2),
                    rotation: canonical,
                },
                Crossing {
                    curves: (a1, a2),
                    rotation: second,
                },
            ],
        )
        .unwrap()
    };
    // Same sign twice: a torus with two square faces.
    let same = build(canonical);
    assert_eq!(trace_faces(&same).unwrap().sizes, vec![4, 4]);
    assert!(bigon_scan(&same).is_empty());
    // Opposite signs: two circles on a sphere, four lunes.
    let opposite = build(mirrored);
    assert_eq!(trace_faces(&opposite).unwrap().euler, 2);
    assert_eq!(bigon_scan(&opposite).len(), 4);
}

#[test]
fn framing_conventions_are_distinguishable() {
    let w = build_monodromy(FamilyParams::new(2, 1, 1)).unwrap();
    let r = Slope::new(7, 2).unwrap();
    let a = surgered_h1(&w, r, FramingConvention::BindingPage);
    let b = surgered_h1(&w, r, FramingConvention::SectionFiber);
    assert_ne!(a, b);
}

#[test]
fn zero_slope_recovers_the_bundle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let g = rng.gen_range(1..=3u32);
        let pairs: Vec<(u32, i64)> = (0..rng.gen_range(0..8))
            .map(|_| (rng.gen_range(1..=2 * g + 1), rng.gen_range(-2..=2)))
            .collect();
        let w = TwistWord::from_pairs(SurfaceSpec::closed(g).unwrap(), &pairs).unwrap();
        assert_eq!(
            surgered_h1(&w, Slope::integer(0), FramingConvention::BindingPage),
            mapping_torus_h1(&w)
        );
    }
}

#[test]
fn identity_bundle_surgeries() {
    // On Σ_g × S^1 the fiber classes survive and the section meridian
    // picks up Z/p.
    for g in 1..=4u32 {
        let id = TwistWord::identity(SurfaceSpec::closed(g).unwrap());
        for p in 1..=6i64 {
            for q in 1..=4i64 {
                let Ok(r) = Slope::new(p, q) else { continue };
                let h = surgered_h1(&id, r, FramingConvention::BindingPage);
                let mut want = AbelianGroupInvariant::free(2 * g as usize);
                if p > 1 {
                    want.torsion.push(BigInt::from(p));
                }
                assert_eq!(h, want, "g={g} r={r}");
            }
        }
    }
}

#[test]
fn family_characteristic_polynomials() {
    use chaintwist::homology::{casson_bleiler_check, CbVerdict};
    // Factorizations computed independently with a computer algebra system.
    let r = casson_bleiler_check(&build_monodromy(FamilyParams::new(2, 1, 1)).unwrap());
    assert_eq!(r.verdict, CbVerdict::Inconclusive);
    assert_eq!(r.cyclotomic_factors, vec![3, 6]);
    for (m, n, coeffs) in [(2, 3, [1, 3, 3, 3, 1]), (3, 1, [1, 2, 1, 2, 1])] {
        let r = casson_bleiler_check(&build_monodromy(FamilyParams::new(2, m, n)).unwrap());
        let got: Vec<BigInt> = r.characteristic_polynomial.coeffs().to_vec();
        let want: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(got, want);
        assert!(r.irreducible);
        assert_eq!(r.verdict, CbVerdict::CertifiedPA);
    }
}
