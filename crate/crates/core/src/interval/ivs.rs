//! The `.ivs` interval constraint file format.
//!
//! ```text
//! var X Y
//! X >= [0,0]
//! Y >= meet(X, [-inf,9])
//! X >= add(Y, One)
//! ```

use super::{Interval, IntervalSystem, IvForm};
use crate::csys::ics::var;
use crate::csys::text::{Cursor, ParseError, Tok};
use crate::csys::SystemBuilder;
use crate::scalar::Scalar;

/// Parses an interval constraint system.
pub fn parse_ivs<S: Scalar>(source: &str) -> Result<IntervalSystem<S>, ParseError> {
    let mut b = SystemBuilder::new();
    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let mut cur = Cursor::lex(line_no, line)?;
        if cur.is_empty() {
            continue;
        }
        if cur.peek() == Some(&Tok::Ident("var".into())) {
            cur.ident()?;
            if cur.at_end() {
                return Err(cur.error("`var` needs at least one name"));
            }
            while !cur.at_end() {
                let (name, col) = cur.ident()?;
                b.declare(&name).map_err(|e| ParseError::new(line_no, col, e.to_string()))?;
            }
            continue;
        }
        let output = var(&mut cur, &b)?;
        cur.sym(">=")?;
        let (form, inputs) = if starts_constant(&cur) {
            (IvForm::Const(constant(&mut cur)?), vec![])
        } else {
            let (head, head_col) = cur.ident()?;
            cur.sym("(")?;
            let parsed = match head.as_str() {
                "neg" => (IvForm::Neg, vec![var(&mut cur, &b)?]),
                "meet" => {
                    let y = var(&mut cur, &b)?;
                    cur.sym(",")?;
                    (IvForm::Meet(constant(&mut cur)?), vec![y])
                }
                "add" | "mul" => {
                    let y = var(&mut cur, &b)?;
                    cur.sym(",")?;
                    let z = var(&mut cur, &b)?;
                    (if head == "add" { IvForm::Add } else { IvForm::Mul }, vec![y, z])
                }
                _ => return Err(ParseError::new(line_no, head_col, format!("unknown function `{head}`"))),
            };
            cur.sym(")")?;
            parsed
        };
        cur.finish()?;
        b.push(output, form, inputs).map_err(|e| ParseError::new(line_no, 1, e.to_string()))?;
    }
    Ok(b.build())
}

fn starts_constant(cur: &Cursor) -> bool {
    match cur.peek() {
        Some(Tok::Sym("[")) => true,
        Some(Tok::Ident(s)) => s == "empty" || s == "top",
        _ => false,
    }
}

/// `[L,U]`, `empty` or `top`.
fn constant<S: Scalar>(cur: &mut Cursor) -> Result<Interval<S>, ParseError> {
    if let Some(Tok::Ident(s)) = cur.peek() {
        let k = match s.as_str() {
            "empty" => Interval::empty(),
            "top" => Interval::full(),
            _ => return Err(cur.error("expected an interval")),
        };
        cur.ident()?;
        return Ok(k);
    }
    cur.sym("[")?;
    let lo = cur.ext()?;
    cur.sym(",")?;
    let hi = cur.ext()?;
    cur.sym("]")?;
    Ok(Interval::from_bounds(lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn parses_every_form_and_round_trips() {
        let src = "var X Y Z\nX >= [0,0]\nX >= empty\nY >= top\nY >= neg(X)\nZ >= add(X, Y)\n\
                   Z >= meet(X, [-inf,9])\nZ >= mul(Y, X)\nZ >= [3,1]\n";
        let sys = parse_ivs::<BigInt>(src).unwrap();
        assert_eq!(sys.constraint_count(), 8);
        assert_eq!(sys.constraint(7).form, IvForm::Const(Interval::empty()));
        assert_eq!(parse_ivs::<BigInt>(&sys.to_string()).unwrap(), sys);
    }

    #[test]
    fn diagnostics() {
        let err = parse_ivs::<BigInt>("var X\nX >= meet(X, 5)\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 14));
        let err = parse_ivs::<BigInt>("var X\nX >= sqrt(X)\n").unwrap_err();
        assert!(err.message.contains("unknown function"));
        let err = parse_ivs::<BigInt>("var X\nX >= [1,2\n").unwrap_err();
        assert_eq!(err.line, 2);
    }
}
