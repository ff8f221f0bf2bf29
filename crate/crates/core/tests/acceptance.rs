//! Acceptance criteria 1 to 11. Prints one PASS/FAIL line per criterion and
//! exits nonzero when any criterion fails.

use std::process::{Command, ExitCode};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rigidity::certify::{
    build_cone, quadratic_system_residual, solve_cone_membership, verify_certificate,
    verify_disproof, ConeMode, ConeSolution, Kind,
};
use rigidity::graphcore::{
    cartesian_product, circulant, edge_energy, laplacian, named, to_graph6, unit_laplacian, Graph,
    WeightVector,
};
use rigidity::pipeline::{
    run_pipeline, verify_report, CertificationReport, PipelineConfig, Stage, Status,
};
use rigidity::repr::isotypic_decompose;
use rigidity::sdpfeas::{compress_operators, solve_feasibility, DEFAULT_MAX_ITER, DEFAULT_SDP_TOL};
use rigidity::spectra::{
    cluster_eigenspace, eig_sym, lambda_bounds, EigenspaceCluster, Side, DEFAULT_CLUSTER_TOL,
};
use rigidity::symmetry::{
    automorphism_generators, close_group, edge_orbits, permute_vector, symmetrize_weights,
    EdgeOrbitPartition, GroupGenerators, Permutation, DEFAULT_GROUP_CAP, DEFAULT_NODE_BUDGET,
};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, tol: f64, what: &str) -> Outcome {
    ensure((a - b).abs() <= tol, || {
        format!("{what}: got {a:.12}, want {b:.12} (tol {tol:e})")
    })
}

fn status(r: &CertificationReport, want: &[Status], what: &str) -> Outcome {
    ensure(want.contains(&r.status), || {
        format!("{what}: status {:?}, error {:?}", r.status, r.error)
    })
}

fn cluster(g: &Graph, side: Side) -> EigenspaceCluster {
    cluster_eigenspace(
        &eig_sym(&unit_laplacian(g)).unwrap(),
        side,
        DEFAULT_CLUSTER_TOL,
    )
    .unwrap()
}

fn full_group(g: &Graph) -> GroupGenerators {
    automorphism_generators(g, &[], DEFAULT_NODE_BUDGET).unwrap()
}

const CERTIFIED: [Status; 2] = [Status::CertifiedExact, Status::CertifiedNumeric];

fn criterion_1() -> Outcome {
    let g = named::barbell();
    let (l2, _) = lambda_bounds(&g, &WeightVector::uniform(g.m())).map_err(|e| e.to_string())?;
    close(l2, (5.0 - 17f64.sqrt()) / 2.0, 1e-10, "uniform lambda_2")?;
    let r = run_pipeline(&g, "barbell", Kind::Lower, &PipelineConfig::default());
    status(&r, &[Status::Disproved], "pipeline")?;
    let d = r.disproof.as_ref().ok_or("missing disproof")?;
    ensure(
        d.achieved >= 0.70 && verify_disproof(&g, d, Kind::Lower),
        || format!("achieved {}", d.achieved),
    )?;
    let w = WeightVector::normalized(named::barbell_reweighting()).map_err(|e| e.to_string())?;
    let (l2, _) = lambda_bounds(&g, &w).map_err(|e| e.to_string())?;
    close(l2, (9.0 - 57f64.sqrt()) / 2.0, 1e-10, "fixture lambda_2")
}

fn criterion_2() -> Outcome {
    let g = named::friendship(3);
    let (_, ln) = lambda_bounds(&g, &WeightVector::uniform(g.m())).map_err(|e| e.to_string())?;
    close(ln, 7.0, 1e-10, "uniform lambda_n")?;
    let r = run_pipeline(&g, "F3", Kind::Upper, &PipelineConfig::default());
    status(&r, &[Status::Disproved], "pipeline")?;
    ensure(verify_report(&g, &r), || {
        "disproof does not re-verify".into()
    })?;
    let w =
        WeightVector::normalized(named::friendship_reweighting(3)).map_err(|e| e.to_string())?;
    let (_, ln) = lambda_bounds(&g, &w).map_err(|e| e.to_string())?;
    close(ln, 4.5, 1e-10, "fixture lambda_n")
}

fn criterion_3() -> Outcome {
    let g = circulant(21, &[1, 6]).map_err(|e| e.to_string())?;
    let pi = std::f64::consts::PI;
    for (kind, c) in [
        (Kind::Lower, 2.0 * (1.0 - (2.0 * pi / 7.0).cos())),
        (Kind::Upper, 2.0 * (1.0 - (6.0 * pi / 7.0).cos())),
    ] {
        let r = run_pipeline(&g, "Z21", kind, &PipelineConfig::default());
        status(&r, &CERTIFIED, kind.label())?;
        ensure(r.orbit_sizes.as_deref() == Some(&[21, 21][..]), || {
            format!("orbit sizes {:?}", r.orbit_sizes)
        })?;
        let cert = r.certificate.as_ref().ok_or("missing certificate")?;
        ensure(cert.vectors.len() == 1, || {
            format!("{} vectors", cert.vectors.len())
        })?;
        ensure(verify_report(&g, &r), || {
            "certificate does not re-verify".into()
        })?;
        close(cert.verification.c_normalized, c, 1e-6, "c")?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let g = circulant(12, &[2, 3]).map_err(|e| e.to_string())?;
    let c = cluster(&g, Side::Second);
    close(c.lambda, 3.0, 1e-8, "lambda_2")?;
    ensure(c.dim() == 6, || format!("multiplicity {}", c.dim()))?;
    let gens =
        GroupGenerators::new(&g, vec![Permutation::rotation(12, 1)]).map_err(|e| e.to_string())?;
    let closure = close_group(&gens, DEFAULT_GROUP_CAP).map_err(|e| e.to_string())?;
    let part = edge_orbits(&g, &gens);
    let dec = isotypic_decompose(&c, &closure, 0).map_err(|e| e.to_string())?;
    let shape: Vec<(usize, usize, usize)> = dec
        .components
        .iter()
        .map(|c| (c.irr_dim, c.mult, c.endo_dim))
        .collect();
    ensure(shape == vec![(2, 1, 2); 3], || {
        format!("isotypics {shape:?}")
    })?;
    let cone = build_cone(&g, &dec, &part, 0).map_err(|e| e.to_string())?;
    let want = [[6.0, 12.0], [18.0, 0.0], [6.0, 12.0]];
    for (got, want) in cone.generators.iter().zip(&want) {
        ensure(
            got.iter().zip(want).all(|(a, b)| (a - b).abs() <= 1e-8),
            || format!("generator {got:?} vs {want:?}"),
        )?;
    }
    let ConeSolution::Found(coeffs) = solve_cone_membership(&cone, ConeMode::ExactRational) else {
        return Err("cone infeasible".into());
    };
    ensure(
        coeffs.is_exact() && coeffs.strings() == ["1", "1/3", "0"],
        || format!("a = {:?}", coeffs.strings()),
    )?;
    let z12 = PipelineConfig {
        group: rigidity::pipeline::GroupSource::Generators(gens.gens().to_vec()),
        ..Default::default()
    };
    let r = run_pipeline(&g, "Z12", Kind::Lower, &z12);
    status(&r, &[Status::CertifiedExact], "pipeline")?;
    let a = r
        .certificate
        .as_ref()
        .and_then(|c| c.a.clone())
        .unwrap_or_default();
    ensure(a == ["1", "1/3", "0"], || format!("report a = {a:?}"))
}

fn criterion_5() -> Outcome {
    let g = named::crossing_number_6b();
    let c = cluster(&g, Side::Second);
    close(c.lambda, 1.0, 1e-8, "lambda_2")?;
    ensure(c.dim() == 3, || format!("multiplicity {}", c.dim()))?;
    let part = edge_orbits(&g, &full_group(&g));
    let mut sizes = part.sizes.clone();
    sizes.sort_unstable();
    ensure(sizes == [6, 12, 12], || {
        format!("orbit sizes {:?}", part.sizes)
    })?;
    let rows = named::crossing_number_6b_basis();
    let basis = DMatrix::from_fn(20, 3, |r, c| rows[c][r]);
    let x = [1.0 - 2f64.sqrt() / 2.0, 2.0, -2.0];
    let res = quadratic_system_residual(&g, &basis, &part, &x).map_err(|e| e.to_string())?;
    let worst = res.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    ensure(worst <= 1e-8, || format!("orbit residual {worst:e}"))?;
    let phi: Vec<f64> = (&basis * nalgebra::DVector::from_column_slice(&x))
        .iter()
        .copied()
        .collect();
    let v = verify_certificate(&g, &part, &[(1.0, phi)], 1.0, Kind::Lower, 1e-8)
        .map_err(|e| e.to_string())?;
    ensure(v.passed, || format!("fixture verification {v:?}"))?;
    let r = run_pipeline(&g, "6B", Kind::Upper, &PipelineConfig::default());
    status(&r, &[Status::CertifiedExact], "pipeline upper")?;
    let cert = r.certificate.as_ref().ok_or("missing certificate")?;
    ensure(cert.method == "alternating", || {
        format!("method {}", cert.method)
    })?;
    let e = edge_energy(&g, &cert.vectors[0].phi).map_err(|e| e.to_string())?;
    ensure(e.values.iter().all(|&x| x == 4.0), || {
        format!("edge energies {:?}", e.values)
    })
}

fn criterion_6() -> Outcome {
    let g = named::hog_56676();
    let c = cluster(&g, Side::Second);
    let gens = full_group(&g);
    let closure = close_group(&gens, DEFAULT_GROUP_CAP).map_err(|e| e.to_string())?;
    let part = edge_orbits(&g, &gens);
    ensure(part.sizes == [40, 10], || {
        format!("orbit sizes {:?}", part.sizes)
    })?;
    let dec = isotypic_decompose(&c, &closure, 0).map_err(|e| e.to_string())?;
    let mut shape: Vec<(usize, &str)> = dec
        .components
        .iter()
        .map(|c| (c.irr_dim, c.type_label()))
        .collect();
    shape.sort_unstable();
    ensure(shape == [(2, "complex"), (5, "real")], || {
        format!("isotypics {shape:?}")
    })?;
    let cone = build_cone(&g, &dec, &part, 0).map_err(|e| e.to_string())?;
    let s5 = 5f64.sqrt();
    let want = [
        [230.0 - 90.0 * s5, 0.0],
        [180.0 - 68.0 * s5, 45.0 - 17.0 * s5],
    ];
    let mut matched = Vec::new();
    for want in &want {
        let hit = cone.generators.iter().enumerate().find_map(|(j, got)| {
            let s = want[0] / got[0];
            got.iter()
                .zip(want)
                .all(|(a, b)| (a * s - b).abs() <= 1e-6)
                .then_some((j, s))
        });
        matched.push(hit.ok_or_else(|| {
            format!(
                "no generator on the ray {want:?}, got {:?}",
                cone.generators
            )
        })?);
    }
    let ConeSolution::Found(coeffs) = solve_cone_membership(&cone, ConeMode::ExactRational) else {
        return Err("cone infeasible".into());
    };
    let raw = coeffs.to_f64();
    let a: Vec<f64> = matched.iter().map(|&(j, s)| raw[j] / s).collect();
    let r = run_pipeline(&g, "56676", Kind::Lower, &PipelineConfig::default());
    status(&r, &[Status::CertifiedNumeric], "pipeline")?;
    ensure(r.flags.iter().any(|f| f == "EXACT_UNAVAILABLE"), || {
        format!("flags {:?}", r.flags)
    })?;
    close(
        a[1],
        (17.0 + 45.0 * s5) / 58.0,
        1e-6,
        "a2 in the reference scale",
    )
}

fn criterion_7() -> Outcome {
    let g = named::cycle(5);
    let c = cluster(&g, Side::Second);
    let part = edge_orbits(&g, &full_group(&g));
    let co = compress_operators(&g, &c, Some(&part)).map_err(|e| e.to_string())?;
    let r = solve_feasibility(&co, DEFAULT_SDP_TOL, DEFAULT_MAX_ITER).map_err(|e| e.to_string())?;
    ensure(r.status == rigidity::sdpfeas::SdpStatus::Feasible, || {
        format!("sdp {:?}", r.status)
    })?;
    ensure(r.rank_estimate == 2, || format!("rank {}", r.rank_estimate))?;
    let per_edge = EdgeOrbitPartition::per_edge(&g);
    let mut best = f64::INFINITY;
    for k in 0..20_000 {
        let t = std::f64::consts::PI * k as f64 / 20_000.0;
        let unit = quadratic_system_residual(&g, &c.basis, &per_edge, &[t.cos(), t.sin()])
            .map_err(|e| e.to_string())?;
        let energies: Vec<f64> = unit.iter().map(|r| r + 1.0).collect();
        let scale = 5.0 / energies.iter().sum::<f64>();
        let spread = energies
            .iter()
            .map(|e| (e * scale - 1.0).abs())
            .fold(0.0, f64::max);
        best = best.min(spread);
    }
    ensure(best > 0.1, || {
        format!("per-edge rank-one system nearly solvable, spread {best:e}")
    })?;
    ensure(
        rigidity::certify::bipartite_alternating(&g).is_none(),
        || "C5 reported bipartite".into(),
    )?;
    for kind in [Kind::Lower, Kind::Upper] {
        let rep = run_pipeline(&g, "C5", kind, &PipelineConfig::default());
        status(&rep, &CERTIFIED, kind.label())?;
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    for (name, g) in [
        ("Desargues", named::desargues()),
        ("C4", named::cycle(4)),
        ("Q3", named::hypercube(3)),
    ] {
        let r = run_pipeline(&g, name, Kind::Upper, &PipelineConfig::default());
        status(&r, &[Status::CertifiedExact], name)?;
        ensure(r.route == [Stage::Spectra, Stage::RegularBipartite], || {
            format!("{name} route {:?}", r.route)
        })?;
        ensure(r.sdp.is_none() && r.group_order.is_none(), || {
            format!("{name} ran searches")
        })?;
        ensure(verify_report(&g, &r), || {
            format!("{name} does not re-verify")
        })?;
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    let g = cartesian_product(&named::desargues(), &named::cycle(5)).map_err(|e| e.to_string())?;
    ensure(g.n() == 100, || format!("n = {}", g.n()))?;
    let c = cluster(&g, Side::Second);
    let part = edge_orbits(&g, &full_group(&g));
    let orbit = compress_operators(&g, &c, Some(&part)).map_err(|e| e.to_string())?;
    let edge = compress_operators(&g, &c, None).map_err(|e| e.to_string())?;
    ensure(orbit.count() <= 10, || {
        format!("orbit constraints {}", orbit.count())
    })?;
    ensure(edge.count() == 250, || {
        format!("per-edge constraints {}", edge.count())
    })?;
    let a =
        solve_feasibility(&orbit, DEFAULT_SDP_TOL, DEFAULT_MAX_ITER).map_err(|e| e.to_string())?;
    let b =
        solve_feasibility(&edge, DEFAULT_SDP_TOL, DEFAULT_MAX_ITER).map_err(|e| e.to_string())?;
    ensure(a.status == b.status, || {
        format!("orbit mode {:?}, per-edge mode {:?}", a.status, b.status)
    })
}

fn random_weights(rng: &mut ChaCha8Rng, m: usize) -> WeightVector {
    let raw: Vec<f64> = (0..m).map(|_| rng.gen::<f64>()).collect();
    WeightVector::normalized(raw).unwrap()
}

fn property_graphs() -> Vec<(&'static str, Graph)> {
    vec![
        ("K4", named::complete(4)),
        ("C5", named::cycle(5)),
        ("C7", named::cycle(7)),
        ("Petersen", named::petersen()),
        ("barbell", named::barbell()),
        ("F3", named::friendship(3)),
        ("Z12", circulant(12, &[2, 3]).unwrap()),
        ("Z21", circulant(21, &[1, 6]).unwrap()),
    ]
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for (name, g) in property_graphs() {
        let gens = full_group(&g);
        let closure = close_group(&gens, DEFAULT_GROUP_CAP).map_err(|e| e.to_string())?;
        let n = g.n();
        for sigma in gens.gens() {
            let phi: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let moved = edge_energy(&g, &permute_vector(sigma, &phi))
                .map_err(|e| e.to_string())?
                .values;
            let base = edge_energy(&g, &phi).map_err(|e| e.to_string())?.values;
            for (k, &(u, v)) in g.edges().iter().enumerate() {
                let j = g
                    .edge_index(sigma.apply(u), sigma.apply(v))
                    .ok_or("not an automorphism")?;
                ensure((moved[j] - base[k]).abs() <= 1e-12, || {
                    format!("{name}: equivariance")
                })?;
            }
        }
        for _ in 0..100 {
            let w = random_weights(&mut rng, g.m());
            let ws = symmetrize_weights(&g, &w, &closure).map_err(|e| e.to_string())?;
            let (a2, an) = lambda_bounds(&g, &w).map_err(|e| e.to_string())?;
            let (b2, bn) = lambda_bounds(&g, &ws).map_err(|e| e.to_string())?;
            ensure(b2 >= a2 - 1e-9 && bn <= an + 1e-9, || {
                format!("{name}: symmetrization monotonicity")
            })?;
            let phi: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let l = laplacian(&g, &w).map_err(|e| e.to_string())?;
            let v = nalgebra::DVector::from_column_slice(&phi);
            let quad = v.dot(&(&l * &v));
            let e = edge_energy(&g, &phi).map_err(|e| e.to_string())?.values;
            let pairing: f64 = w.values().iter().zip(&e).map(|(a, b)| a * b).sum();
            ensure((quad - pairing).abs() <= 1e-9 * quad.abs().max(1.0), || {
                format!("{name}: energy pairing")
            })?;
        }
        for kind in [Kind::Lower, Kind::Upper] {
            let r = run_pipeline(&g, name, kind, &PipelineConfig::default());
            let certified = r.status.is_certified() && verify_report(&g, &r);
            let disproved = r.status == Status::Disproved && verify_report(&g, &r);
            ensure(!(certified && disproved), || {
                format!("{name}: certificate and disproof")
            })?;
            if certified {
                for _ in 0..1000 {
                    let w = random_weights(&mut rng, g.m());
                    let (l2, ln) = lambda_bounds(&g, &w).map_err(|e| e.to_string())?;
                    let ok = match kind {
                        Kind::Lower => l2 <= r.lambda + 1e-6,
                        Kind::Upper => ln >= r.lambda - 1e-6,
                    };
                    ensure(ok, || {
                        format!(
                            "{name} [{}]: random weights beat a certified graph",
                            kind.label()
                        )
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn criterion_11() -> Outcome {
    let dir = std::env::temp_dir().join(format!("rigidity-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let file = dir.join("z21.g6");
    std::fs::write(&file, to_graph6(&circulant(21, &[1, 6]).unwrap()))
        .map_err(|e| e.to_string())?;
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_rigidity"))
            .args([
                "check",
                file.to_str().unwrap(),
                "--target",
                "both",
                "--seed",
                "7",
                "--json",
            ])
            .output()
            .map_err(|e| e.to_string())
    };
    let a = run()?;
    let b = run()?;
    let _ = std::fs::remove_dir_all(&dir);
    ensure(a.status.code() == Some(0), || {
        format!("exit {:?}", a.status.code())
    })?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || {
        "JSON differs between runs".into()
    })
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("barbell lower disproof", criterion_1),
        ("friendship F3 upper disproof", criterion_2),
        ("Cay(Z21,{1,6}) single-vector certificates", criterion_3),
        ("Cay(Z12,{2,3}) exact cone certificate", criterion_4),
        ("crossing number 6B certificates", criterion_5),
        ("HoG 56676 numeric cone certificate", criterion_6),
        ("C5 rank-two SDP and certification", criterion_7),
        ("regular bipartite upper battery", criterion_8),
        ("Desargues x C5 constraint counts", criterion_9),
        ("property suites", criterion_10),
        ("byte-identical JSON for a fixed seed", criterion_11),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(()) => println!("PASS criterion {:>2}: {name}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name}: {why}", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
