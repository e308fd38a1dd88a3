use std::fmt::Write;

use super::{Presentation, Relation};

/// Canonical DSL text; `parse(render(p)) == p`.
pub fn render(p: &Presentation) -> String {
    let mut out = String::new();
    writeln!(out, "name {}", p.name).unwrap();
    writeln!(out, "mode {}", p.mode).unwrap();
    for g in &p.generators {
        write!(out, "op {} arity {}", g.symbol, g.arity).unwrap();
        for e in &g.equivariances {
            write!(out, " sym {} = {}", e.perm, e.scalar).unwrap();
        }
        out.push('\n');
    }
    for (name, v) in &p.params {
        writeln!(out, "param {name} = {v}").unwrap();
    }
    for r in &p.relations {
        writeln!(out, "rel {}", render_relation(r)).unwrap();
    }
    out
}

/// `c1 * t1 + c2 * t2 ...` with unit coefficients omitted.
pub fn render_relation(r: &Relation) -> String {
    let mut s = String::new();
    for (k, (c, t)) in r.terms.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !a.is_one() {
            write!(s, "{a} * ").unwrap();
        }
        write!(s, "{t}").unwrap();
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    #[test]
    fn round_trip() {
        let src = "# Lie with a comment\nname Lie\nmode symmetric\nop b arity 2 sym [2,1] = -1\nrel b(b(x1,x2),x3) + b(b(x2,x3),x1) = -b(b(x3,x1),x2)\n";
        let p = parse(src).unwrap();
        let text = render(&p);
        assert_eq!(
            text,
            "name Lie\nmode symmetric\nop b arity 2 sym [2,1] = -1\nrel b(b(x1,x2),x3) + b(b(x2,x3),x1) + b(b(x3,x1),x2)\n"
        );
        assert_eq!(parse(&text).unwrap(), p);
        assert_eq!(render(&parse(&text).unwrap()), text);
    }

    #[test]
    fn fractional_and_negative_coefficients() {
        let src = "name P\nop m arity 2\nparam a = -1/3\nrel -2/3 * m(m(x1,x2),x3) - a * m(x1,m(x2,x3))\n";
        let p = parse(src).unwrap();
        let text = render(&p);
        assert!(text.contains("rel -2/3 * m(m(x1,x2),x3) + 1/3 * m(x1,m(x2,x3))"), "{text}");
        assert_eq!(parse(&text).unwrap(), p);
    }
}
