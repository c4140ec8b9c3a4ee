use super::{Formula, Term};

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    term(t, 0, &mut out);
    out
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    formula(f, 0, true, &mut out);
    out
}

fn term(t: &Term, min: u8, out: &mut String) {
    if let Some(n) = t.as_numeral() {
        out.push_str(&n.to_string());
        return;
    }
    match t {
        Term::Var(v) => out.push_str(v),
        Term::Succ(inner) => {
            out.push_str("S(");
            term(inner, 0, out);
            out.push(')');
        }
        Term::Plus(l, r) | Term::Times(l, r) => {
            let (prec, op) = if matches!(t, Term::Plus(..)) { (0, " + ") } else { (1, " * ") };
            if prec < min {
                out.push('(');
            }
            term(l, prec, out);
            out.push_str(op);
            term(r, prec + 1, out);
            if prec < min {
                out.push(')');
            }
        }
        Term::Zero => unreachable!("zero is a numeral"),
    }
}

/// `tail` is true when nothing follows this formula at the current nesting
/// level, so a quantifier body may extend to the end without parentheses.
fn formula(f: &Formula, min: u8, tail: bool, out: &mut String) {
    let binary = |prec: u8, op: &str, l: &Formula, lmin: u8, r: &Formula, rmin: u8, out: &mut String| {
        let paren = prec < min;
        if paren {
            out.push('(');
        }
        formula(l, lmin, false, out);
        out.push_str(op);
        formula(r, rmin, tail || paren, out);
        if paren {
            out.push(')');
        }
    };
    if let Some((a, b)) = f.as_iff() {
        binary(0, " <-> ", a, 1, b, 0, out);
        return;
    }
    match f {
        Formula::Falsum => out.push_str("bot"),
        Formula::Eq(l, r) => {
            term(l, 0, out);
            out.push_str(" = ");
            term(r, 0, out);
        }
        Formula::Lt(l, r) => {
            term(l, 0, out);
            out.push_str(" < ");
            term(r, 0, out);
        }
        Formula::Pred(name, args) => {
            out.push_str(name);
            if !args.is_empty() || !name.starts_with(|c: char| c.is_ascii_uppercase()) {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    term(a, 0, out);
                }
                out.push(')');
            }
        }
        Formula::Box(tpl, subst) => {
            out.push_str("Prov[ ");
            formula(tpl, 0, true, out);
            out.push_str(" ;");
            for (i, (v, t)) in subst.iter().enumerate() {
                out.push_str(if i == 0 { " " } else { ", " });
                out.push_str(v);
                out.push_str(" := ");
                term(t, 0, out);
            }
            out.push_str(" ]");
        }
        Formula::Not(g) => {
            out.push('~');
            formula(g, 4, tail, out);
        }
        Formula::Imp(l, r) => binary(1, " -> ", l, 2, r, 1, out),
        Formula::Or(l, r) => binary(2, " | ", l, 2, r, 3, out),
        Formula::And(l, r) => binary(3, " & ", l, 3, r, 4, out),
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            let q = if matches!(f, Formula::ForAll(..)) { "all" } else { "exists" };
            if !tail {
                out.push('(');
            }
            out.push_str(q);
            out.push(' ');
            out.push_str(v);
            out.push_str(". ");
            formula(body, 0, true, out);
            if !tail {
                out.push(')');
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::{parse_formula, Formula, Term};

    #[test]
    fn basic_printing() {
        assert_eq!(Formula::Eq(Term::Zero, Term::Zero).to_string(), "0 = 0");
        assert_eq!(Term::numeral(3).to_string(), "3");
        assert_eq!(Term::succ(Term::var("x")).to_string(), "S(x)");
    }

    #[test]
    fn quantifier_parenthesization() {
        for s in [
            "(all x. x = x) -> 0 = 0",
            "~(all x. x = x) & 0 = 0",
            "0 = 0 -> all x. x = x",
            "~exists x. x < 1",
            "Prov[ all x. x = x ; ] -> Con",
            "(a = b -> b = a) <-> c = d",
            "a = b <-> c = d <-> e = f",
            "x * (y + z) < (x + y) + z",
        ] {
            let f = parse_formula(s).unwrap();
            let printed = f.to_string();
            assert_eq!(parse_formula(&printed).unwrap(), f, "{s} printed as {printed}");
        }
    }

    #[test]
    fn yablo_definition_shape() {
        let f = parse_formula("all x. (k < x) -> ~Prov[ YG(x) ; x := x ]").unwrap();
        assert_eq!(f.to_string(), "all x. k < x -> ~Prov[ YG(x) ; x := x ]");
    }
}
