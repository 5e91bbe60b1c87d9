//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use gpc_core::epc::{
    build_h2, build_h3, build_optimal_g1, check_condition_35, default_global_field, distance_bound, EpcShape,
};
use gpc_core::field::{BinaryPoly, Field, FieldElement};
use gpc_core::gpc::{
    decode_iterative, decode_rows, decode_rows_traced, Encoder, ErasurePattern, GpcParams, SymbolArray,
};
use gpc_core::oracle::{brute_min_distance, correctable, decoder_oracle_equivalence, PatternSource};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gf8() -> Field {
    Field::new(3, BinaryPoly(0b1011), FieldElement(2)).unwrap()
}

fn example_code() -> GpcParams {
    GpcParams::from_u_vector(7, 4, &[1, 1, 3, 4, 4, 4], gf8()).unwrap()
}

fn codeword(params: &GpcParams, salt: u64) -> SymbolArray {
    let q = params.field().size() as u64;
    let data: Vec<FieldElement> = (0..params.dimension() as u64)
        .map(|i| FieldElement((i * i * 7 + salt * 13 + 3) % q))
        .collect();
    Encoder::new(params).encode(&data).unwrap()
}

fn rows_pattern(m: usize, n: usize, rows: &[&[usize]]) -> ErasurePattern {
    let pos = rows
        .iter()
        .enumerate()
        .flat_map(|(r, cols)| cols.iter().map(move |&c| (r, c)))
        .collect();
    ErasurePattern::new(m, n, pos)
}

fn dimension_and_rank() -> Check {
    let p = example_code();
    let rank = p.full_parity_matrix().rank(p.field());
    ensure(p.dimension() == 19 && rank == 23, || {
        format!("K = {}, rank = {rank}", p.dimension())
    })
}

fn distance_formula() -> Check {
    let d = example_code().min_distance();
    ensure(d == 10, || format!("d = {d}"))
}

fn decoder_trace() -> Check {
    let p = example_code();
    let f = p.field().clone();
    let c = codeword(&p, 1);
    let pattern = rows_pattern(
        6,
        7,
        &[
            &[2],
            &[0, 1, 2, 3, 4, 5, 6],
            &[1, 2, 4, 6],
            &[0, 3, 5],
            &[0, 1, 2, 3, 4, 5, 6],
            &[4],
        ],
    );
    let mut r = c.clone();
    r.apply_erasures(&pattern);
    let (out, trace) = decode_rows_traced(&p, &r).map_err(|e| e.to_string())?;
    ensure(out == c, || "decoded array differs".into())?;
    ensure(trace.order == vec![1, 4, 2, 3, 0, 5], || {
        format!("order {:?}", trace.order)
    })?;
    let a = |e: i64| f.alpha_pow(e);
    let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
    let expected = [
        [o, o, o, o, o, o],
        [z, o, a(2), a(5), a(1), a(4)],
        [z, z, o, a(1), a(3), a(1)],
        [z, z, z, o, a(3), a(5)],
    ];
    let tri = trace.triangulated.ok_or("no triangulation recorded")?;
    ensure((tri.rows(), tri.cols()) == (4, 6), || {
        format!("{}x{}", tri.rows(), tri.cols())
    })?;
    for (i, row) in expected.iter().enumerate() {
        ensure(tri.row(i) == row, || format!("row {i}: {:?} != {row:?}", tri.row(i)))?;
    }
    Ok(())
}

fn bound_table() -> Check {
    let b = distance_bound(&EpcShape::new(7, 2, 8, 3, 3).unwrap()).map_err(|e| e.to_string())?;
    ensure(
        b.bound == 20 && b.table == vec![(1, 24), (2, 20), (3, 22), (4, 21)],
        || format!("{b:?}"),
    )
}

fn transpose_and_iterate() -> Check {
    let p = GpcParams::from_u_vector(7, 5, &[1, 1, 3, 3, 5, 5], gf8()).unwrap();
    let t = p.transpose().map_err(|e| e.to_string())?;
    ensure(t.to_string() == "C(6;6,(1,1,2,2,4,4,4))", || t.to_string())?;
    let c = codeword(&p, 2);
    let pattern = rows_pattern(6, 7, &[&[0, 4], &[0, 1], &[1, 2], &[2, 3], &[3, 4]]);
    ensure(pattern.len() == 10, || "pattern size".into())?;
    let mut r = c.clone();
    r.apply_erasures(&pattern);
    ensure(decode_rows(&p, &r).is_err(), || "row decoder alone should fail".into())?;
    let out = decode_iterative(&p, &r).map_err(|e| e.to_string())?;
    ensure(out == c, || "iterative output differs".into())
}

/// Every valid parameter set with `m n <= 24`, `m, n >= 2`, `t <= 3`, over
/// the smallest default field that fits.
fn desk_grid() -> Vec<GpcParams> {
    fn compositions(m: usize, t: usize) -> Vec<Vec<usize>> {
        if t == 1 {
            return vec![vec![m]];
        }
        (1..m)
            .flat_map(|first| {
                compositions(m - first, t - 1).into_iter().map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
            })
            .collect()
    }
    fn increasing(lo: usize, hi: usize, t: usize) -> Vec<Vec<usize>> {
        if t == 0 {
            return vec![vec![]];
        }
        (lo..=hi)
            .flat_map(|x| {
                increasing(x + 1, hi, t - 1).into_iter().map(move |mut rest| {
                    rest.insert(0, x);
                    rest
                })
            })
            .collect()
    }
    let mut out = Vec::new();
    for m in 2..=12 {
        for n in 2..=12 {
            if m * n > 24 {
                continue;
            }
            let field = Field::smallest_default(m.max(n) as u64).unwrap();
            for t in 1..=3.min(m).min(n - 1) {
                for s in compositions(m, t) {
                    for u in increasing(1, n - 1, t) {
                        for k in 0..=m {
                            if let Ok(p) = GpcParams::new(m, n, k, s.clone(), u.clone(), field.clone()) {
                                out.push(p);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn oracle_grid() -> Check {
    let grid = desk_grid();
    let mut levels = [0usize; 4];
    for p in &grid {
        levels[p.t()] += 1;
        let h = p.full_parity_matrix();
        let rank = h.rank(p.field());
        ensure(rank == p.length() - p.dimension(), || {
            format!("{p:?}: rank {rank}, expected {}", p.length() - p.dimension())
        })?;
        let report = brute_min_distance(p.field(), &h, p.length()).map_err(|e| format!("{p:?}: {e}"))?;
        ensure(report.distance == p.min_distance(), || {
            format!("{p:?}: brute force {}, formula {}", report.distance, p.min_distance())
        })?;
    }
    ensure(levels[1] > 0 && levels[2] > 0 && levels[3] > 0, || {
        format!("levels {levels:?}")
    })?;
    println!(
        "      {} codes (t=1: {}, t=2: {}, t=3: {})",
        grid.len(),
        levels[1],
        levels[2],
        levels[3]
    );
    Ok(())
}

fn optimal_g1() -> Check {
    let mut checked = 0;
    for m in 3..=7 {
        for n in 3..=7 {
            for v in 1..=2 {
                for h in 1..=2 {
                    if m < v + 2 || n < h + 2 {
                        continue;
                    }
                    let field = Field::smallest_default(m.max(n) as u64).unwrap();
                    let p = build_optimal_g1(m, v, n, h, field).map_err(|e| e.to_string())?;
                    let b = distance_bound(&EpcShape::new(m, v, n, h, 1).unwrap()).unwrap();
                    ensure(p.min_distance() == b.bound, || {
                        format!("EP({m},{v};{n},{h};1): {} vs bound {}", p.min_distance(), b.bound)
                    })?;
                    checked += 1;
                }
            }
        }
    }
    let ex = build_optimal_g1(4, 1, 5, 1, gf8()).map_err(|e| e.to_string())?;
    ensure(ex.to_string() == "C(5;3,(1,1,2,2))" && ex.min_distance() == 6, || {
        ex.to_string()
    })?;
    println!("      {checked} shapes");
    Ok(())
}

fn suboptimal_g2() -> Check {
    let bound = distance_bound(&EpcShape::new(5, 1, 5, 1, 2).unwrap()).unwrap().bound;
    ensure(bound == 8, || format!("bound {bound}"))?;
    for u in [[1, 1, 1, 3, 3], [1, 1, 2, 2, 2]] {
        let p = GpcParams::from_u_vector(5, 4, &u, gf8()).unwrap();
        ensure(p.min_distance() == 6, || format!("{p}: d = {}", p.min_distance()))?;
    }
    Ok(())
}

fn h2_distance() -> Check {
    let f = default_global_field(3, 3).unwrap();
    ensure(f.width() == 4, || format!("field {f}"))?;
    let code = build_h2(3, 3, f.clone()).map_err(|e| e.to_string())?;
    let h = code.parity_check();
    let r = brute_min_distance(&f, h, 9).map_err(|e| e.to_string())?;
    ensure(r.distance == 8, || format!("d = {}", r.distance))?;
    let mut n = 0;
    for skip in 0..9 {
        for skip2 in skip + 1..9 {
            let pat: Vec<usize> = (0..9).filter(|&i| i != skip && i != skip2).collect();
            ensure(correctable(&f, h, &pat), || format!("{pat:?} not correctable"))?;
            n += 1;
        }
    }
    ensure(n == 36, || format!("{n} patterns"))
}

fn h3_distance() -> Check {
    for (m, n, p) in [(3, 3, 11), (3, 4, 13)] {
        let f = Field::from_mp(p).map_err(|e| e.to_string())?;
        check_condition_35(m, n, &f).map_err(|v| format!("{m}x{n}: {v:?}"))?;
        let code = build_h3(m, n, f.clone()).map_err(|e| e.to_string())?;
        let r = brute_min_distance(&f, code.parity_check(), m * n).map_err(|e| e.to_string())?;
        ensure(r.distance == 9, || format!("{m}x{n}: d = {}", r.distance))?;
        if (m, n) == (3, 4) {
            let mut count = 0;
            for a in 0..12 {
                for b in a + 1..12 {
                    for c in b + 1..12 {
                        for d in c + 1..12 {
                            let pat: Vec<usize> = (0..12).filter(|i| ![a, b, c, d].contains(i)).collect();
                            ensure(correctable(&f, code.parity_check(), &pat), || format!("{pat:?}"))?;
                            count += 1;
                        }
                    }
                }
            }
            ensure(count == 495, || format!("{count} patterns"))?;
        }
    }
    Ok(())
}

fn differential() -> Check {
    let gpc = GpcParams::from_u_vector(5, 4, &[1, 1, 2, 3, 3], gf8()).unwrap();
    let pattern = rows_pattern(5, 5, &[&[0, 1, 3], &[0, 1], &[0, 1, 3]]);
    let c = codeword(&gpc, 3);
    let mut r = c.clone();
    r.apply_erasures(&pattern);
    let out = decode_rows(&gpc, &r).map_err(|e| format!("GPC: {e}"))?;
    ensure(out == c, || "GPC output differs".into())?;

    let f = default_global_field(5, 5).unwrap();
    let h2 = build_h2(5, 5, f).map_err(|e| e.to_string())?;
    let word = h2
        .encode(&(1..=h2.dimension() as u64).map(FieldElement).collect::<Vec<_>>())
        .map_err(|e| e.to_string())?;
    let mut erased = vec![false; 25];
    for i in pattern.flat() {
        erased[i] = true;
    }
    ensure(h2.erasure_decode(&word, &erased).is_err(), || {
        "H2 code decoded the pattern".into()
    })?;
    ensure(!correctable(h2.field(), h2.parity_check(), &pattern.flat()), || {
        "oracle calls the pattern correctable for H2".into()
    })
}

fn roundtrip() -> Check {
    let p = example_code();
    let r = decoder_oracle_equivalence(&p, 1000, 2024, PatternSource::Decodable);
    ensure(r.discrepancies.is_empty(), || format!("{:?}", r.discrepancies.first()))?;
    ensure(r.rows_decoded == 1000, || format!("{} of 1000 decoded", r.rows_decoded))?;
    println!(
        "      seed {}: {} trials, {} decoded by rows",
        r.seed, r.trials, r.rows_decoded
    );
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (
            "dimension 19 and parity rank 23 for C(7;4,(1,1,3,4,4,4))",
            dimension_and_rank,
        ),
        ("distance formula gives 10", distance_formula),
        ("triangulation trace matches the worked example", decoder_trace),
        (
            "bound table for EP(7,2;8,3;3) is 24,20,22,21 with bound 20",
            bound_table,
        ),
        (
            "transpose of C(7;5,(1,1,3,3,5,5)) and staircase iterative decode",
            transpose_and_iterate,
        ),
        (
            "brute-force distance and rank match formulas on the mn <= 24 grid",
            oracle_grid,
        ),
        ("single-global-parity construction meets the bound", optimal_g1),
        ("two-global-parity GPCs stop at distance 6 below bound 8", suboptimal_g2),
        ("H2 3x3 over GF(16) has distance 8", h2_distance),
        ("H3 over M_11 and M_13 fields has distance 9", h3_distance),
        ("GPC corrects the 3+2+3 pattern that H2 cannot", differential),
        ("1000 decodable-pattern round trips", roundtrip),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("PASS {:>2} {name} ({secs:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
