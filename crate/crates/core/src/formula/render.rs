use super::Formula;

const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        Formula::Atom(_) | Formula::Not(_) | Formula::Bel(..) | Formula::Comp(..) => UNARY,
    }
}

/// Prints `f` in the concrete syntax with as few parentheses as the
/// grammar allows; `parse(&render(f)) == f`.
pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    write(f, &mut out);
    out
}

fn write_at(f: &Formula, min_level: u8, out: &mut String) {
    if level(f) < min_level {
        out.push('(');
        write(f, out);
        out.push(')');
    } else {
        write(f, out);
    }
}

fn write_binary(l: &Formula, op: &str, r: &Formula, lvl: u8, right_assoc: bool, out: &mut String) {
    let (lmin, rmin) = if right_assoc {
        (lvl + 1, lvl)
    } else {
        (lvl, lvl + 1)
    };
    write_at(l, lmin, out);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    write_at(r, rmin, out);
}

fn write_prefixed(prefix: &str, body: &Formula, out: &mut String) {
    out.push_str(prefix);
    if level(body) < UNARY {
        write_at(body, UNARY, out);
    } else {
        out.push(' ');
        write(body, out);
    }
}

fn write(f: &Formula, out: &mut String) {
    match f {
        Formula::Atom(name) => out.push_str(name),
        Formula::Not(g) => {
            out.push('~');
            write_at(g, UNARY, out);
        }
        Formula::And(l, r) => write_binary(l, "&", r, AND, false, out),
        Formula::Or(l, r) => write_binary(l, "|", r, OR, false, out),
        Formula::Implies(l, r) => write_binary(l, "->", r, IMP, true, out),
        Formula::Iff(l, r) => write_binary(l, "<->", r, IFF, true, out),
        Formula::Bel(a, g) => write_prefixed(&format!("B[{a}]"), g, out),
        Formula::Comp(a, g) => write_prefixed(&format!("C[{a}]"), g, out),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse, Agent};
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn a() -> Agent {
        Agent::new("a").unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(
            render(&Formula::and(p(), Formula::not(Formula::bel(&a(), p())))),
            "p & ~B[a] p"
        );
        assert_eq!(
            render(&Formula::comp(&a(), Formula::not(Formula::bel(&a(), p())))),
            "C[a] ~B[a] p"
        );
        assert_eq!(render(&Formula::iff(p(), Formula::atom("q"))), "p <-> q");
    }

    #[test]
    fn parenthesizes_only_where_needed() {
        for text in [
            "B[a](p & ~B[a] p)",
            "(p -> q) -> r",
            "p -> q -> r",
            "p & (q & r)",
            "p & q & r",
            "(p | q) & r",
            "~(p <-> q) <-> r",
            "~~B[a] C[b] ~p",
        ] {
            let f = parse(text).unwrap();
            assert_eq!(render(&f), text, "render of {text}");
        }
    }
}
