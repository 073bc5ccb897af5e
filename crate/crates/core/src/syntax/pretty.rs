//! Canonical pretty-printer. `parse_model` of the output reconstructs a
//! structurally equal model, and the printed text is the input of the model
//! digest.

use crate::model::{
    ArithOp, Assign, CmpOp, EventSpec, EventSys, Expr, Model, Program, Ty, Value,
};
use sha2::{Digest, Sha256};
use std::fmt::Write;

fn prec_of(e: &Expr) -> u8 {
    match e {
        Expr::Implies(..) => 1,
        Expr::Or(..) => 2,
        Expr::And(..) => 3,
        Expr::Cmp(..) => 4,
        Expr::Arith(ArithOp::Add | ArithOp::Sub, ..) => 5,
        Expr::Arith(ArithOp::Mul, ..) => 6,
        Expr::Not(..) => 7,
        Expr::MapGet(..) | Expr::MapSet(..) => 8,
        // Quantifier bodies extend maximally to the right, so quantifiers
        // only print bare in the loosest context.
        Expr::Forall(..) | Expr::Exists(..) => 1,
        _ => 9,
    }
}

fn fmt_value(v: &Value, out: &mut String) {
    match v {
        Value::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Value::Int(i) => {
            let _ = write!(out, "{i}");
        }
        Value::Sym(s) => out.push_str(s),
        Value::Map(m) => {
            out.push('{');
            for (i, (k, v)) in m.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{k}: ");
                fmt_value(v, out);
            }
            out.push('}');
        }
    }
}

fn fmt_expr_prec(e: &Expr, ctx: u8, out: &mut String) {
    let p = prec_of(e);
    let need = p < ctx;
    if need {
        out.push('(');
    }
    match e {
        Expr::Lit(v) => fmt_value(v, out),
        Expr::Var(n) => out.push_str(n),
        Expr::Prime(n) => {
            out.push_str(n);
            out.push('\'');
        }
        Expr::MapGet(m, k) => {
            fmt_expr_prec(m, 8, out);
            out.push('[');
            fmt_expr_prec(k, 0, out);
            out.push(']');
        }
        Expr::MapSet(m, k, v) => {
            fmt_expr_prec(m, 8, out);
            out.push('[');
            fmt_expr_prec(k, 0, out);
            out.push_str(" := ");
            fmt_expr_prec(v, 0, out);
            out.push(']');
        }
        Expr::MapLit(entries) => {
            out.push('{');
            for (i, (k, v)) in entries.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(k);
                out.push_str(": ");
                fmt_expr_prec(v, 0, out);
            }
            out.push('}');
        }
        Expr::Ite(c, t, f) => {
            out.push_str("IF ");
            fmt_expr_prec(c, 0, out);
            out.push_str(" THEN ");
            fmt_expr_prec(t, 0, out);
            out.push_str(" ELSE ");
            fmt_expr_prec(f, 0, out);
            out.push_str(" END");
        }
        Expr::Arith(op, a, b) => {
            let (sym, lp, rp) = match op {
                ArithOp::Add => (" + ", 5, 6),
                ArithOp::Sub => (" - ", 5, 6),
                ArithOp::Mul => (" * ", 6, 7),
            };
            fmt_expr_prec(a, lp, out);
            out.push_str(sym);
            fmt_expr_prec(b, rp, out);
        }
        Expr::Cmp(op, a, b) => {
            let sym = match op {
                CmpOp::Eq => " = ",
                CmpOp::Ne => " != ",
                CmpOp::Lt => " < ",
                CmpOp::Le => " <= ",
                CmpOp::Gt => " > ",
                CmpOp::Ge => " >= ",
            };
            fmt_expr_prec(a, 5, out);
            out.push_str(sym);
            fmt_expr_prec(b, 5, out);
        }
        Expr::Not(a) => {
            out.push('!');
            fmt_expr_prec(a, 7, out);
        }
        Expr::And(a, b) => {
            fmt_expr_prec(a, 3, out);
            out.push_str(" && ");
            fmt_expr_prec(b, 4, out);
        }
        Expr::Or(a, b) => {
            fmt_expr_prec(a, 2, out);
            out.push_str(" || ");
            fmt_expr_prec(b, 3, out);
        }
        Expr::Implies(a, b) => {
            fmt_expr_prec(a, 2, out);
            out.push_str(" -> ");
            fmt_expr_prec(b, 1, out);
        }
        Expr::Forall(x, c, body) => {
            let _ = write!(out, "forall {x} : {c} . ");
            fmt_expr_prec(body, 1, out);
        }
        Expr::Exists(x, c, body) => {
            let _ = write!(out, "exists {x} : {c} . ");
            fmt_expr_prec(body, 1, out);
        }
    }
    if need {
        out.push(')');
    }
}

/// Render an expression in concrete syntax.
pub fn fmt_expr(e: &Expr) -> String {
    let mut s = String::new();
    fmt_expr_prec(e, 0, &mut s);
    s
}

fn fmt_ty(ty: &Ty, out: &mut String) {
    match ty {
        Ty::Bool => out.push_str("bool"),
        Ty::Int { lo, hi } => {
            let _ = write!(out, "int {lo}..{hi}");
        }
        Ty::Sym(c) => out.push_str(c),
        Ty::Map { key, val } => {
            let _ = write!(out, "map {key} -> ");
            fmt_ty(val, out);
        }
    }
}

fn fmt_assigns(assigns: &[Assign], out: &mut String) {
    for (i, a) in assigns.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&a.var);
        if let Some(k) = &a.key {
            out.push('[');
            fmt_expr_prec(k, 0, out);
            out.push(']');
        }
        out.push_str(" := ");
        fmt_expr_prec(&a.rhs, 0, out);
    }
}

fn fmt_stmt(p: &Program, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match p {
        Program::Seq(..) => {
            out.push_str(&pad);
            out.push_str("(\n");
            fmt_program(p, indent + 1, out);
            out.push('\n');
            out.push_str(&pad);
            out.push(')');
        }
        Program::None | Program::Basic(_) => {
            out.push_str(&pad);
            match p {
                Program::Basic(a) if a.is_empty() => out.push_str("SKIP"),
                Program::Basic(a) => fmt_assigns(a, out),
                // Residual marker; never produced for source models.
                _ => out.push_str("SKIP"),
            }
        }
        Program::Cond(b, p1, p2) => {
            out.push_str(&pad);
            out.push_str("IF ");
            fmt_expr_prec(b, 0, out);
            out.push_str(" THEN\n");
            fmt_program(p1, indent + 1, out);
            out.push('\n');
            out.push_str(&pad);
            out.push_str("ELSE\n");
            fmt_program(p2, indent + 1, out);
            out.push('\n');
            out.push_str(&pad);
            out.push_str("END");
        }
        Program::While(b, body, inv) => {
            out.push_str(&pad);
            out.push_str("WHILE ");
            fmt_expr_prec(b, 0, out);
            if let Some(i) = inv {
                out.push_str(" INV [");
                fmt_expr_prec(i, 0, out);
                out.push(']');
            }
            out.push_str(" DO\n");
            fmt_program(body, indent + 1, out);
            out.push('\n');
            out.push_str(&pad);
            out.push_str("END");
        }
        Program::Await(b, body) => {
            out.push_str(&pad);
            out.push_str("AWAIT ");
            fmt_expr_prec(b, 0, out);
            out.push_str(" THEN\n");
            fmt_program(body, indent + 1, out);
            out.push('\n');
            out.push_str(&pad);
            out.push_str("END");
        }
        Program::Nondt(r) => {
            out.push_str(&pad);
            out.push_str("NONDT [");
            fmt_expr_prec(r, 0, out);
            out.push(']');
        }
    }
}

fn fmt_program(p: &Program, indent: usize, out: &mut String) {
    match p {
        Program::Seq(a, b, mid) => {
            fmt_stmt(a, indent, out);
            out.push_str(" ;;");
            if let Some(m) = mid {
                out.push('[');
                fmt_expr_prec(m, 0, out);
                out.push(']');
            }
            out.push('\n');
            fmt_program(b, indent, out);
        }
        other => fmt_stmt(other, indent, out),
    }
}

/// Render a program in concrete syntax (used by traces and reports too).
pub fn fmt_program_string(p: &Program, indent: usize) -> String {
    let mut s = String::new();
    fmt_program(p, indent, &mut s);
    s
}

fn fmt_esys(model: &Model, sys: &EventSys, out: &mut String) {
    match sys {
        EventSys::Set(members) => {
            out.push_str("{ ");
            for (i, m) in members.iter().enumerate() {
                if i > 0 {
                    out.push_str(" |> ");
                }
                out.push_str(&model.event(*m).name);
            }
            out.push_str(" }");
        }
        EventSys::Seq(head, mid, rest) => {
            match head {
                EventSpec::Basic(i) => out.push_str(&model.event(*i).name),
                EventSpec::Anony(_) => out.push_str("<anonymous>"),
            }
            out.push_str(" ;");
            if let Some(m) = mid {
                out.push('[');
                fmt_expr_prec(m, 0, out);
                out.push(']');
            }
            out.push(' ');
            fmt_esys(model, rest, out);
        }
    }
}

/// Canonical text of a model. Deterministic: two calls yield byte-identical
/// output.
pub fn pretty_print(model: &Model) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "MODEL {}", model.name);
    out.push('\n');

    for c in &model.carriers {
        let _ = write!(out, "CARRIER {} = {{ ", c.name);
        out.push_str(&c.members.join(", "));
        out.push_str(" }\n");
    }
    if !model.carriers.is_empty() {
        out.push('\n');
    }

    let _ = write!(out, "CORES = {{ ");
    out.push_str(&model.cores.join(", "));
    out.push_str(" }\n\n");

    for v in &model.vars {
        let _ = write!(out, "VAR {} : ", v.name);
        fmt_ty(&v.ty, &mut out);
        out.push('\n');
    }
    if !model.vars.is_empty() {
        out.push('\n');
    }

    if !model.init.is_empty() {
        out.push_str("INIT ");
        for (i, (n, e)) in model.init.iter().enumerate() {
            if i > 0 {
                out.push_str(",\n     ");
            }
            let _ = write!(out, "{n} := ");
            fmt_expr_prec(e, 0, &mut out);
        }
        out.push_str("\n\n");
    }

    for ev in &model.events {
        let _ = write!(out, "EVENT {}", ev.name);
        if !ev.params.is_empty() {
            out.push_str(" (");
            for (i, (p, ty)) in ev.params.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{p} : ");
                fmt_ty(ty, &mut out);
            }
            out.push(')');
        }
        if let Some(k) = &ev.kvar {
            let _ = write!(out, " @ {k}");
        }
        out.push_str(" WHERE\n  ");
        fmt_expr_prec(&ev.guard, 0, &mut out);
        out.push_str("\nTHEN\n");
        fmt_program(&ev.body, 1, &mut out);
        out.push_str("\nEND\n\n");
    }

    for (i, sys) in model.systems.iter().enumerate() {
        let _ = write!(out, "ESYS {} = ", model.cores[i]);
        fmt_esys(model, sys, &mut out);
        out.push('\n');
    }
    if !model.systems.is_empty() {
        out.push('\n');
    }

    if let Some(p) = &model.policy {
        out.push_str("POLICY\n");
        out.push_str("  DOMAINS = { ");
        out.push_str(&p.domains.join(", "));
        out.push_str(" }\n");
        out.push_str("  INTERF = {\n");
        for (i, (a, b)) in p.interf.iter().enumerate() {
            let _ = write!(out, "    {a} ~> {b}");
            if i + 1 < p.interf.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("  }\n");
        let (kv, ev, e) = &p.dom_evt;
        let _ = write!(out, "  DOMEVT ({kv}, {ev}) = ");
        fmt_expr_prec(e, 0, &mut out);
        out.push('\n');
        for (d, e) in &p.obs {
            let _ = write!(out, "  OBS {d} = ");
            fmt_expr_prec(e, 0, &mut out);
            out.push('\n');
        }
        for (d, e) in &p.vpeq {
            let _ = write!(out, "  VPEQ {d} = ");
            fmt_expr_prec(e, 0, &mut out);
            out.push('\n');
        }
        out.push('\n');
    }

    if !model.rgspec.events.is_empty() || !model.rgspec.systems.is_empty() {
        out.push_str("RGSPEC\n");
        for (name, q) in &model.rgspec.events {
            let _ = writeln!(out, "  FOR {name} {{");
            let _ = writeln!(out, "    PRE: {}", fmt_expr(&q.pre));
            let _ = writeln!(out, "    RELY: {}", fmt_expr(&q.rely));
            let _ = writeln!(out, "    GUAR: {}", fmt_expr(&q.guar));
            let _ = writeln!(out, "    POST: {}", fmt_expr(&q.post));
            out.push_str("  }\n");
        }
        for (core, q) in &model.rgspec.systems {
            let _ = writeln!(out, "  FOR SYS {core} {{");
            let _ = writeln!(out, "    PRE: {}", fmt_expr(&q.pre));
            let _ = writeln!(out, "    RELY: {}", fmt_expr(&q.rely));
            let _ = writeln!(out, "    GUAR: {}", fmt_expr(&q.guar));
            let _ = writeln!(out, "    POST: {}", fmt_expr(&q.post));
            out.push_str("  }\n");
        }
    }

    out
}

/// Content hash of the canonical pretty-printed model.
pub fn model_digest(model: &Model) -> String {
    let text = pretty_print(model);
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}
