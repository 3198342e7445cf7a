//! The `.ics` integer constraint file format.
//!
//! ```text
//! # comment
//! var X One
//! X >= const(0)
//! X >= add(X, One)
//! One >= const(1)
//! ```

use super::text::{Cursor, ParseError, Tok};
use super::{ConstraintSystem, IntForm, SystemBuilder, VarId};
use crate::extint::{BiFun, TestFun};
use crate::scalar::Scalar;

/// Parses an integer constraint system.
pub fn parse_ics<S: Scalar>(source: &str) -> Result<ConstraintSystem<S>, ParseError> {
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
        let (head, head_col) = cur.ident()?;
        cur.sym("(")?;
        let (form, inputs) = match head.as_str() {
            "const" => (BiFun::Const(cur.ext()?).into(), vec![]),
            "id" => (BiFun::Id.into(), vec![var(&mut cur, &b)?]),
            "min" => {
                let y = var(&mut cur, &b)?;
                cur.sym(",")?;
                (BiFun::GuardedMin(cur.ext()?).into(), vec![y])
            }
            "add" | "mulp" | "mulm" => {
                let y = var(&mut cur, &b)?;
                cur.sym(",")?;
                let z = var(&mut cur, &b)?;
                let f = match head.as_str() {
                    "add" => BiFun::Add,
                    "mulp" => BiFun::MulPlus,
                    _ => BiFun::MulMinus,
                };
                (f.into(), vec![y, z])
            }
            "pow2" => (BiFun::Pow2.into(), vec![var(&mut cur, &b)?]),
            "fact" => (BiFun::Factorial.into(), vec![var(&mut cur, &b)?]),
            "test_geq" | "test_gt" => {
                let k = cur.ext()?;
                cur.sym(";")?;
                let g = var(&mut cur, &b)?;
                cur.sym(",")?;
                let v = var(&mut cur, &b)?;
                let t = if head == "test_geq" { TestFun::Geq(k) } else { TestFun::Gt(k) };
                (IntForm::Test(t), vec![g, v])
            }
            _ => return Err(ParseError::new(line_no, head_col, format!("unknown function `{head}`"))),
        };
        cur.sym(")")?;
        cur.finish()?;
        b.push(output, form, inputs).map_err(|e| ParseError::new(line_no, 1, e.to_string()))?;
    }
    Ok(b.build())
}

impl<S> From<BiFun<S>> for IntForm<S> {
    fn from(f: BiFun<S>) -> Self {
        IntForm::Bi(f)
    }
}

pub(crate) fn var<F: super::Form>(cur: &mut Cursor, b: &SystemBuilder<F>) -> Result<VarId, ParseError> {
    let (name, col) = cur.ident()?;
    b.lookup(&name)
        .ok_or_else(|| ParseError::new(cur.line(), col, format!("undeclared variable `{name}`")))
}
