use std::fmt::Write;

use super::restricted::{RestrictedModel, Sense};
use crate::scalar::Scalar;

const TERMS_PER_LINE: usize = 8;

/// Writes the model in CPLEX LP format: variables `y_g0 .. y_g{G−1}`,
/// constraints named `<kind>_<index>`.
pub fn export_lp<F: Scalar>(model: &RestrictedModel<'_, F>) -> String {
    let mut out = String::new();
    let g = model.n_groups();
    let _ = writeln!(out, "\\ {}: {} groups, {} constraints", model.instance().name(), g, model.constraints().len());
    out.push_str("Maximize\n obj:");
    let mut written = 0;
    for (id, &c) in model.objective().iter().enumerate() {
        let c = c.as_f64();
        if c == 0.0 {
            continue;
        }
        if written > 0 && written % TERMS_PER_LINE == 0 {
            out.push_str("\n     ");
        }
        let sign = if c < 0.0 { '-' } else { '+' };
        let _ = write!(out, " {sign} {} y_g{id}", c.abs());
        written += 1;
    }
    if written == 0 && g > 0 {
        out.push_str(" 0 y_g0");
    }
    out.push_str("\nSubject To\n");
    for (k, con) in model.constraints().iter().enumerate() {
        let _ = write!(out, " {}_{k}:", con.kind.tag());
        for (j, &(group, coef)) in con.terms.iter().enumerate() {
            if j > 0 && j % TERMS_PER_LINE == 0 {
                out.push_str("\n     ");
            }
            let sign = if coef < 0 { '-' } else { '+' };
            let _ = write!(out, " {sign} {} y_g{group}", coef.abs());
        }
        let op = match con.sense {
            Sense::Le => "<=",
            Sense::Eq => "=",
        };
        let _ = writeln!(out, " {op} {}", con.rhs);
    }
    out.push_str("Binaries\n");
    for id in 0..g {
        let _ = write!(out, " y_g{id}");
        if (id + 1) % 16 == 0 || id + 1 == g {
            out.push('\n');
        }
    }
    out.push_str("End\n");
    out
}
