//! Deterministic text output for the subcommands.

use std::fmt::Write as _;

use chaindecomp_core::canon3::CanonicalT3;
use chaindecomp_core::{IntervalMultiset, InvariantTable, LinearIso, Matrix};

use crate::format::write_rows;

fn block(out: &mut String, name: &str, m: &Matrix) {
    let _ = writeln!(out, "{name} {} {}", m.rows(), m.cols());
    write_rows(out, m);
}

/// `phi <i> <d> <d>` headers, each followed by the rows of `phi_i`.
pub fn witness(phi: &LinearIso) -> String {
    let mut out = String::new();
    for (i, m) in phi.mats().iter().enumerate() {
        block(&mut out, &format!("phi {}", i + 1), m);
    }
    out
}

/// `p`, `q`, `r`, the blocks `N1`, `N2`, then the multiset.
pub fn canon3(canon: &CanonicalT3, intervals: &IntervalMultiset) -> String {
    let mut out = format!("p {}\nq {}\nr {}\n", canon.p, canon.q, canon.r);
    block(&mut out, "N1", &canon.n1);
    block(&mut out, "N2", &canon.n2);
    let _ = write!(out, "{intervals}");
    out
}

/// One line per entry where the tables differ; empty when they agree.
pub fn table_diff(a: &InvariantTable, b: &InvariantTable, color: bool) -> Vec<String> {
    let paint = |s: String| if color { format!("\x1b[31m{s}\x1b[0m") } else { s };
    if a.t() != b.t() {
        return vec![paint(format!("t: {} vs {}", a.t(), b.t()))];
    }
    let mut out = Vec::new();
    for i in 1..=a.t() {
        for j in 1..=i {
            let (x, y) = (a.get(i, j), b.get(i, j));
            if x != y {
                out.push(paint(format!("n[{i}][{j}]: {x} vs {y}")));
            }
        }
    }
    out
}
