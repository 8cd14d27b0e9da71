//! Pure primitive operations on literals, shared by the evaluator and the
//! runtime. Effectful primitives live in the runtime.

use crate::core::Lit;

#[derive(Debug, Clone, PartialEq)]
pub enum PrimResult {
    Lit(Lit),
    Bool(bool),
}

/// Keys of the primitives that have no effects and reduce on literals.
pub const PURE_PRIMS: &[&str] = &[
    "int_add",
    "int_sub",
    "int_mul",
    "int_eq",
    "int_lt",
    "int_show",
    "str_append",
    "str_eq",
    "str_reverse",
    "str_to_int",
    "char_to_str",
];

pub fn is_pure(key: &str) -> bool {
    PURE_PRIMS.contains(&key)
}

/// Evaluates a pure primitive. `None` when the key is unknown or the
/// arguments have the wrong shape.
pub fn apply_pure(key: &str, args: &[Lit]) -> Option<PrimResult> {
    use Lit::*;
    let lit = PrimResult::Lit;
    Some(match (key, args) {
        ("int_add", [Int(a), Int(b)]) => lit(Int(a.wrapping_add(*b))),
        ("int_sub", [Int(a), Int(b)]) => lit(Int(a.wrapping_sub(*b))),
        ("int_mul", [Int(a), Int(b)]) => lit(Int(a.wrapping_mul(*b))),
        ("int_eq", [Int(a), Int(b)]) => PrimResult::Bool(a == b),
        ("int_lt", [Int(a), Int(b)]) => PrimResult::Bool(a < b),
        ("int_show", [Int(a)]) => lit(Str(a.to_string())),
        ("str_append", [Str(a), Str(b)]) => lit(Str(format!("{a}{b}"))),
        ("str_eq", [Str(a), Str(b)]) => PrimResult::Bool(a == b),
        ("str_reverse", [Str(a)]) => lit(Str(a.chars().rev().collect())),
        ("str_to_int", [Str(a)]) => lit(Int(a.trim().parse().unwrap_or(0))),
        ("char_to_str", [Char(c)]) => lit(Str(c.to_string())),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_strings() {
        assert_eq!(apply_pure("int_add", &[Lit::Int(2), Lit::Int(3)]), Some(PrimResult::Lit(Lit::Int(5))));
        assert_eq!(apply_pure("str_reverse", &[Lit::Str("abc".into())]), Some(PrimResult::Lit(Lit::Str("cba".into()))));
        assert_eq!(apply_pure("int_eq", &[Lit::Int(1), Lit::Int(2)]), Some(PrimResult::Bool(false)));
        assert_eq!(apply_pure("int_add", &[Lit::Int(1)]), None);
    }
}
