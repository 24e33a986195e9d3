//! Built-in configurations used by the CLI, the tests and the benches.

use crate::lattice::{QMatrix, QVector};
use crate::orbifold::{Coefficient, OrbifoldDivisor};
use crate::rational::Rational;
use crate::surface::{CurveConfig, CurveId};

fn config(
    name: &str,
    curves: &[&str],
    form: &[&[i64]],
    kdeg: &[i64],
    k_self: Option<i64>,
) -> CurveConfig {
    CurveConfig::new(
        name,
        curves.iter().map(|&c| CurveId::new(c)).collect(),
        QMatrix::from_int_rows(form).expect("square fixture"),
        QVector::from_ints(kdeg),
        k_self.map(Rational::integer),
        true,
    )
    .expect("fixture must validate")
}

/// The projective plane with a line class `H`.
pub fn p2() -> CurveConfig {
    config("P2", &["H"], &[&[1]], &[-3], Some(9))
}

/// The plane blown up at one point off the line: curves `H`, `E`.
pub fn p2_blown_up() -> CurveConfig {
    config(
        "P2-blown-up",
        &["H", "E"],
        &[&[1, 0], &[0, -1]],
        &[-3, -1],
        Some(8),
    )
}

/// The plane blown up at `k` general points: `H`, `E1..Ek`.
pub fn p2_blown_up_points(k: usize) -> CurveConfig {
    let mut curves = vec![CurveId::new("H")];
    curves.extend((1..=k).map(|i| CurveId::new(format!("E{i}"))));
    let mut form = QMatrix::zeros(k + 1);
    form[(0, 0)] = Rational::one();
    let mut kdeg = vec![Rational::integer(-3)];
    for i in 1..=k {
        form[(i, i)] = Rational::integer(-1);
        kdeg.push(Rational::integer(-1));
    }
    CurveConfig::new(
        format!("P2-blown-up-{k}"),
        curves,
        form,
        QVector(kdeg),
        Some(Rational::integer(9 - k as i64)),
        true,
    )
    .expect("fixture must validate")
}

/// The plane with `k` lines in general position.
pub fn p2_with_lines(k: usize) -> CurveConfig {
    let curves = (1..=k).map(|i| CurveId::new(format!("L{i}"))).collect();
    let mut form = QMatrix::zeros(k);
    for i in 0..k {
        for j in 0..k {
            form[(i, j)] = Rational::one();
        }
    }
    CurveConfig::new(
        format!("P2-{k}-lines"),
        curves,
        form,
        QVector(vec![Rational::integer(-3); k]),
        Some(Rational::integer(9)),
        true,
    )
    .expect("fixture must validate")
}

/// `P^1 x P^1` with its two rulings.
pub fn quadric() -> CurveConfig {
    config(
        "quadric",
        &["F1", "F2"],
        &[&[0, 1], &[1, 0]],
        &[-2, -2],
        Some(8),
    )
}

/// Two (-2)-curves meeting once.
pub fn a2() -> CurveConfig {
    ade('A', 2)
}

/// An A2 chain `C1 - C2` with a (-1)-curve `C` meeting `C1` once.
pub fn a2_with_tail() -> CurveConfig {
    config(
        "A2-with-tail",
        &["C1", "C2", "C"],
        &[&[-2, 1, 1], &[1, -2, 0], &[1, 0, -1]],
        &[0, 0, -1],
        None,
    )
}

/// Central (-2)-curve `C0` meeting three (-2)-curves.
pub fn d4() -> CurveConfig {
    ade('D', 4)
}

/// Configuration of (-2)-curves along the Dynkin diagram of type
/// `kind`/`n` (`A_n`, `D_n` for n >= 4, `E_6`, `E_7`, `E_8`).
///
/// `D_n` uses `C0` as the branch vertex; `E_n` branches at `C0` with arms
/// of length 1, 2 and n - 4.
pub fn ade(kind: char, n: usize) -> CurveConfig {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let labels: Vec<String>;
    match kind {
        'A' => {
            assert!(n >= 1);
            labels = (1..=n).map(|i| format!("C{i}")).collect();
            edges.extend((0..n.saturating_sub(1)).map(|i| (i, i + 1)));
        }
        'D' => {
            assert!(n >= 4);
            labels = (0..n).map(|i| format!("C{i}")).collect();
            // C0 meets C1, C2, C3; C3 continues the long arm.
            edges.extend([(0, 1), (0, 2), (0, 3)]);
            edges.extend((3..n - 1).map(|i| (i, i + 1)));
        }
        'E' => {
            assert!((6..=8).contains(&n));
            labels = (0..n).map(|i| format!("C{i}")).collect();
            // Arms: C1; C2-C3; C4-...-C(n-1).
            edges.extend([(0, 1), (0, 2), (2, 3), (0, 4)]);
            edges.extend((4..n - 1).map(|i| (i, i + 1)));
        }
        _ => panic!("unknown Dynkin type {kind}"),
    }
    let mut form = QMatrix::zeros(n);
    for i in 0..n {
        form[(i, i)] = Rational::integer(-2);
    }
    for (i, j) in edges {
        form[(i, j)] = Rational::one();
        form[(j, i)] = Rational::one();
    }
    CurveConfig::new(
        format!("{kind}{n}"),
        labels.into_iter().map(CurveId).collect(),
        form,
        QVector::zeros(n),
        None,
        true,
    )
    .expect("fixture must validate")
}

/// Two disjoint curves with `C^2 = -1`, `K.C = 1` (arithmetic genus one).
pub fn positive_genus() -> CurveConfig {
    config(
        "positive-genus",
        &["C1", "C2"],
        &[&[-1, 0], &[0, -1]],
        &[1, 1],
        None,
    )
}

fn mult(components: &[(&str, u64)]) -> OrbifoldDivisor {
    OrbifoldDivisor::new(
        components
            .iter()
            .map(|&(c, m)| (CurveId::new(c), Coefficient::Mult(m))),
    )
    .expect("fixture boundary")
}

/// (-1)-curve `E` meeting a (-2)-curve `C` once; boundary `(1/2)C`.
pub fn case1() -> (CurveConfig, OrbifoldDivisor) {
    let c = config(
        "case1",
        &["E", "C"],
        &[&[-1, 1], &[1, -2]],
        &[-1, 0],
        None,
    );
    (c, mult(&[("C", 2)]))
}

/// (-1)-curve `E` meeting `A`, `B`, `C` once each; boundary
/// `(30/31)E + (1/2)A + (2/3)B + (4/5)C`.
pub fn platonic_235() -> (CurveConfig, OrbifoldDivisor) {
    let c = config(
        "platonic-2-3-5",
        &["E", "A", "B", "C"],
        &[
            &[-1, 1, 1, 1],
            &[1, -2, 0, 0],
            &[1, 0, -2, 0],
            &[1, 0, 0, -2],
        ],
        &[-1, 0, 0, 0],
        None,
    );
    (c, mult(&[("E", 31), ("A", 2), ("B", 3), ("C", 5)]))
}

/// (-1)-curve `E` meeting `A` and `B` once; boundary `(1/2)E + (1/2)A + (5/6)B`.
pub fn minus_one_certified() -> (CurveConfig, OrbifoldDivisor) {
    let c = config(
        "minus-one-certified",
        &["E", "A", "B"],
        &[&[-1, 1, 1], &[1, -2, 0], &[1, 0, -2]],
        &[-1, 0, 0],
        None,
    );
    (c, mult(&[("E", 2), ("A", 2), ("B", 6)]))
}

/// A named built-in problem.
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub config: CurveConfig,
    pub boundary: Option<OrbifoldDivisor>,
}

pub fn all() -> Vec<Fixture> {
    let (c1, d1) = case1();
    let (c235, d235) = platonic_235();
    let (cm1, dm1) = minus_one_certified();
    vec![
        Fixture {
            name: "p2",
            description: "projective plane, line class H",
            config: p2(),
            boundary: None,
        },
        Fixture {
            name: "p2-blown-up",
            description: "plane blown up at one general point",
            config: p2_blown_up(),
            boundary: None,
        },
        Fixture {
            name: "quadric",
            description: "P1 x P1 with both rulings",
            config: quadric(),
            boundary: None,
        },
        Fixture {
            name: "a2",
            description: "two (-2)-curves meeting once",
            config: a2(),
            boundary: None,
        },
        Fixture {
            name: "d4",
            description: "D4 star of (-2)-curves",
            config: d4(),
            boundary: None,
        },
        Fixture {
            name: "positive-genus",
            description: "two disjoint curves of arithmetic genus one",
            config: positive_genus(),
            boundary: None,
        },
        Fixture {
            name: "case1",
            description: "(-1)-curve off the boundary, boundary (1/2)C",
            config: c1,
            boundary: Some(d1),
        },
        Fixture {
            name: "platonic-2-3-5",
            description: "curve in the boundary with e = 31 meeting multiplicities 2, 3, 5",
            config: c235,
            boundary: Some(d235),
        },
        Fixture {
            name: "minus-one-certified",
            description: "curve in the boundary with e = 2 certified as a (-1)-curve",
            config: cm1,
            boundary: Some(dm1),
        },
    ]
}

pub fn by_name(name: &str) -> Option<Fixture> {
    all().into_iter().find(|f| f.name == name)
}
