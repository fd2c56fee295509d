//! Human-readable reports on a single monoid.

use std::fmt::Write;

use crate::catalog::Catalog;
use crate::freeobject::{is_isoterm_in_join, IsotermVerdict, DEFAULT_STATE_CAP};
use crate::words::Word;

use super::expr::{ExprError, MonoidExpr};

/// Order, zero, Green's structure, aperiodicity and idempotent behaviour.
pub fn probe_properties(expr: &MonoidExpr, catalog: &Catalog) -> Result<String, ExprError> {
    let m = expr.resolve(catalog)?.monoid();
    let g = m.green();
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut out = String::new();
    let _ = writeln!(out, "monoid        {expr}");
    let _ = writeln!(out, "order         {}", m.order());
    let _ = writeln!(
        out,
        "zero          {}",
        m.zero().map_or("none", |z| m.label(z))
    );
    let _ = writeln!(out, "j-trivial     {}", yes(g.is_j_trivial()));
    match m.aperiodic_index() {
        Ok(n) => {
            let _ = writeln!(out, "aperiodic     yes, x^{} = x^{n}", n + 1);
        }
        Err(_) => {
            let _ = writeln!(out, "aperiodic     no");
        }
    }
    let idempotents: Vec<&str> = m.idempotents().into_iter().map(|e| m.label(e)).collect();
    let _ = writeln!(out, "idempotents   {}", idempotents.join(" "));
    let _ = writeln!(out, "idem-commute  {}", yes(m.idempotents_commute()));
    let _ = writeln!(out, "idem-central  {}", yes(m.idempotents_central()));
    let _ = writeln!(out, "compl-regular {}", yes(g.is_completely_regular(&m)));
    let _ = writeln!(out, "commutative   {}", yes(m.is_commutative()));
    let _ = write!(
        out,
        "green classes L={} R={} J={} H={}",
        g.l_classes.len(),
        g.r_classes.len(),
        g.j_classes.len(),
        g.h_classes.len()
    );
    Ok(out)
}

/// Whether `word` is an isoterm for the variety generated by the monoid.
pub fn probe_isoterm(
    expr: &MonoidExpr,
    word: &Word,
    catalog: &Catalog,
) -> Result<(IsotermVerdict, String), ExprError> {
    let factors: Vec<_> = expr
        .resolve(catalog)?
        .factors
        .into_iter()
        .map(|(_, m)| m)
        .collect();
    let v = is_isoterm_in_join(&factors, word, DEFAULT_STATE_CAP);
    let text = match &v {
        IsotermVerdict::Isoterm => format!("{word} is an isoterm for var({expr})"),
        IsotermVerdict::NotIsoterm { witness } => {
            format!("{word} is not an isoterm for var({expr}): {word} = {witness} holds")
        }
        IsotermVerdict::Inconclusive(e) => format!("{word} undecided for var({expr}): {e}"),
    };
    Ok((v, text))
}
