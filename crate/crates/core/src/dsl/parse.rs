use num_bigint::BigInt;
use num_traits::Zero;

use super::{
    BoundExpr, Command, DecomposeArgs, ElemExpr, GroupExpr, Program, SetExpr, Theorem, VerifyArgs,
};
use crate::error::DslError;
use crate::rational::Rational;

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(src: &str) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn line_col(&self, pos: usize) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for &c in &self.chars[..pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn error_at<T>(&self, pos: usize, message: impl Into<String>) -> Result<T, DslError> {
        let (line, column) = self.line_col(pos);
        Err(DslError::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, DslError> {
        self.error_at(self.pos, message)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.pos += 1;
                }
            } else if c.is_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn looking_at(&mut self, s: &str) -> bool {
        self.skip_ws();
        let n = s.chars().count();
        self.chars.len() >= self.pos + n
            && self.chars[self.pos..self.pos + n]
                .iter()
                .copied()
                .eq(s.chars())
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.looking_at(s) {
            self.pos += s.chars().count();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), DslError> {
        if self.eat(s) {
            Ok(())
        } else {
            let found = match self.peek() {
                Some(c) => format!("'{c}'"),
                None => "end of input".to_string(),
            };
            self.error(format!("expected '{s}', found {found}"))
        }
    }

    fn word(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn digits(&mut self) -> Result<BigInt, DslError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected a number");
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("ascii digits"))
    }

    fn signed(&mut self) -> Result<BigInt, DslError> {
        let neg = self.eat("-");
        let n = self.digits()?;
        Ok(if neg { -n } else { n })
    }

    fn int(&mut self) -> Result<i64, DslError> {
        self.skip_ws();
        let start = self.pos;
        let n = self.signed()?;
        match i64::try_from(n) {
            Ok(v) => Ok(v),
            Err(_) => self.error_at(start, "integer out of range"),
        }
    }

    fn unsigned(&mut self) -> Result<u64, DslError> {
        self.skip_ws();
        let start = self.pos;
        let n = self.digits()?;
        match u64::try_from(n) {
            Ok(v) => Ok(v),
            Err(_) => self.error_at(start, "integer out of range"),
        }
    }

    fn usize_value(&mut self) -> Result<usize, DslError> {
        let v = self.unsigned()?;
        Ok(v as usize)
    }

    fn rational(&mut self) -> Result<Rational, DslError> {
        let num = self.signed()?;
        if self.looking_at("/") {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let den = self.digits()?;
            if den.is_zero() {
                return self.error_at(at, "zero denominator");
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    fn int_list(&mut self, close: &str) -> Result<Vec<i64>, DslError> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.int()?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn prime_list(&mut self) -> Result<Vec<u64>, DslError> {
        self.expect("[")?;
        let mut out = Vec::new();
        if self.eat("]") {
            return Ok(out);
        }
        loop {
            out.push(self.unsigned()?);
            if self.eat("]") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }
}

fn group(c: &mut Cursor) -> Result<GroupExpr, DslError> {
    if c.eat("Q") {
        c.expect("(")?;
        c.expect("gen")?;
        c.expect("=")?;
        let gen = c.rational()?;
        c.expect(",")?;
        c.expect("primes")?;
        c.expect("=")?;
        let primes = c.prime_list()?;
        c.expect(")")?;
        return Ok(GroupExpr::Rational { gen, primes });
    }
    c.expect("Z")?;
    if !c.eat("(") {
        return Ok(GroupExpr::Zed);
    }
    let mut orders = vec![c.int()?];
    while c.eat("x") {
        orders.push(c.int()?);
    }
    c.expect(")")?;
    Ok(GroupExpr::Finite(orders))
}

fn elem(c: &mut Cursor) -> Result<ElemExpr, DslError> {
    if c.eat("(") {
        Ok(ElemExpr::Tuple(c.int_list(")")?))
    } else {
        Ok(ElemExpr::Scalar(c.rational()?))
    }
}

fn bound(c: &mut Cursor, lower: bool) -> Result<BoundExpr, DslError> {
    let open = if lower { "(" } else { ")" };
    let closed = if lower { "[" } else { "]" };
    let inf = if lower { "-inf" } else { "inf" };
    if lower {
        let inclusive = if c.eat(closed) {
            true
        } else {
            c.expect(open)?;
            false
        };
        if c.eat(inf) {
            return Ok(BoundExpr {
                value: None,
                inclusive: false,
            });
        }
        Ok(BoundExpr {
            value: Some(c.rational()?),
            inclusive,
        })
    } else {
        let value = if c.eat(inf) {
            None
        } else {
            Some(c.rational()?)
        };
        let inclusive = if c.eat(closed) {
            true
        } else {
            c.expect(open)?;
            false
        };
        Ok(BoundExpr {
            inclusive: inclusive && value.is_some(),
            value,
        })
    }
}

fn set(c: &mut Cursor) -> Result<SetExpr, DslError> {
    if c.eat("conv") {
        let lower = bound(c, true)?;
        c.expect(",")?;
        let upper = bound(c, false)?;
        if !c.eat("∩") {
            c.expect("&")?;
        }
        c.expect("(")?;
        c.expect("(")?;
        let gen = c.rational()?;
        c.expect(",")?;
        let primes = c.prime_list()?;
        c.expect(")")?;
        c.expect("+")?;
        let base = c.rational()?;
        c.expect(")")?;
        return Ok(SetExpr::Description {
            lower,
            upper,
            gen,
            primes,
            base,
        });
    }
    c.expect("{")?;
    let mut elems = Vec::new();
    if !c.eat("}") {
        loop {
            elems.push(elem(c)?);
            if c.eat("}") {
                break;
            }
            c.expect(",")?;
        }
    }
    let window = if c.eat("@window") {
        c.expect("[")?;
        let a = c.int()?;
        c.expect(",")?;
        let b = c.int()?;
        c.expect("]")?;
        Some((a, b))
    } else {
        None
    };
    Ok(SetExpr::Explicit { elems, window })
}

fn set_once<T>(
    c: &Cursor,
    slot: &mut Option<T>,
    value: T,
    at: usize,
    what: &str,
) -> Result<(), DslError> {
    if slot.is_some() {
        return c.error_at(at, format!("{what} given twice"));
    }
    *slot = Some(value);
    Ok(())
}

fn command(c: &mut Cursor) -> Result<Command, DslError> {
    c.skip_ws();
    let start = c.pos;
    let name = c.word();
    match name.as_str() {
        "check" => {
            let (mut samples, mut seed) = (None, None);
            loop {
                c.skip_ws();
                let at = c.pos;
                if c.eat("--samples") {
                    let v = c.usize_value()?;
                    set_once(c, &mut samples, v, at, "--samples")?;
                } else if c.eat("--seed") {
                    let v = c.unsigned()?;
                    set_once(c, &mut seed, v, at, "--seed")?;
                } else {
                    return Ok(Command::Check { samples, seed });
                }
            }
        }
        "closure" => {
            let mut rounds = None;
            c.skip_ws();
            let at = c.pos;
            if c.eat("--rounds") {
                let v = c.usize_value()?;
                set_once(c, &mut rounds, v, at, "--rounds")?;
            }
            Ok(Command::Closure { rounds })
        }
        "trace" => {
            c.expect("x")?;
            c.expect("=")?;
            let x = elem(c)?;
            c.expect("g")?;
            c.expect("=")?;
            let g = elem(c)?;
            Ok(Command::Trace { x, g })
        }
        "decompose" => {
            let mut a = DecomposeArgs::default();
            loop {
                c.skip_ws();
                let at = c.pos;
                if c.eat("x2") {
                    c.expect("=")?;
                    let v = elem(c)?;
                    set_once(c, &mut a.x2, v, at, "x2")?;
                } else if c.eat("x") {
                    c.expect("=")?;
                    let v = elem(c)?;
                    set_once(c, &mut a.x, v, at, "x")?;
                } else if c.eat("--depth") {
                    let v = c.usize_value()?;
                    set_once(c, &mut a.depth, v, at, "--depth")?;
                } else if c.eat("--window") {
                    c.expect("[")?;
                    let lo = c.rational()?;
                    c.expect(",")?;
                    let hi = c.rational()?;
                    c.expect("]")?;
                    set_once(c, &mut a.window, (lo, hi), at, "--window")?;
                } else {
                    return Ok(Command::Decompose(a));
                }
            }
        }
        "verify" => {
            c.expect("--theorem")?;
            c.skip_ws();
            let at = c.pos;
            let theorem = match c.word().as_str() {
                "1" => Theorem::One,
                "2" => Theorem::Two,
                "3" => Theorem::Three,
                "lemma1" => Theorem::Lemma1,
                "purity" => Theorem::Purity,
                "hull" => Theorem::Hull,
                other => {
                    return c.error_at(
                        at,
                        format!(
                            "unknown theorem '{other}', expected 1, 2, 3, lemma1, purity or hull"
                        ),
                    )
                }
            };
            let mut a = VerifyArgs::default();
            loop {
                c.skip_ws();
                let at = c.pos;
                if c.eat("--max-order") {
                    let v = c.usize_value()?;
                    set_once(c, &mut a.max_order, v, at, "--max-order")?;
                } else if c.eat("--samples") {
                    let v = c.usize_value()?;
                    set_once(c, &mut a.samples, v, at, "--samples")?;
                } else if c.eat("--seed") {
                    let v = c.unsigned()?;
                    set_once(c, &mut a.seed, v, at, "--seed")?;
                } else if c.eat("--rounds") {
                    let v = c.usize_value()?;
                    set_once(c, &mut a.rounds, v, at, "--rounds")?;
                } else {
                    return Ok(Command::Verify(theorem, a));
                }
            }
        }
        "" => c.error_at(start, "expected a group, a set or a command"),
        other => c.error_at(
            start,
            format!(
                "unknown command '{other}', expected check, closure, trace, decompose or verify"
            ),
        ),
    }
}

fn end_statement(c: &mut Cursor) -> Result<(), DslError> {
    if c.at_end() || c.eat(";") {
        Ok(())
    } else {
        let found = c.peek().map(|ch| format!("'{ch}'")).unwrap_or_default();
        c.error(format!("expected ';' or end of input, found {found}"))
    }
}

/// Parses one program. Errors carry 1-based line and column.
pub fn parse(src: &str) -> Result<Program, DslError> {
    let mut c = Cursor::new(src);
    let mut group_expr = None;
    let mut set_expr = None;
    if c.looking_at("Z") || c.looking_at("Q") {
        group_expr = Some(group(&mut c)?);
        end_statement(&mut c)?;
    }
    if c.looking_at("{") || c.looking_at("conv") {
        if group_expr.is_none() {
            return c.error("a set needs a group statement before it");
        }
        set_expr = Some(set(&mut c)?);
        end_statement(&mut c)?;
    }
    if c.at_end() {
        return c.error("missing command");
    }
    let cmd = command(&mut c)?;
    end_statement(&mut c)?;
    if !c.at_end() {
        return c.error("unexpected input after the command");
    }
    Ok(Program {
        group: group_expr,
        set: set_expr,
        command: cmd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn grammar_examples() {
        let p = parse("Z(15); {1,4,7,10,13}; check").unwrap();
        assert_eq!(p.group, Some(GroupExpr::Finite(vec![15])));
        assert_eq!(
            p.set,
            Some(SetExpr::Explicit {
                elems: [1, 4, 7, 10, 13]
                    .iter()
                    .map(|&n| ElemExpr::Scalar(int(n)))
                    .collect(),
                window: None
            })
        );
        assert_eq!(
            p.command,
            Command::Check {
                samples: None,
                seed: None
            }
        );

        let p = parse("Q(gen=1, primes=[2]); conv[0,1] ∩ ((1,[2]) + 0); check").unwrap();
        assert_eq!(
            p.group,
            Some(GroupExpr::Rational {
                gen: int(1),
                primes: vec![2]
            })
        );
        assert_eq!(
            p.set,
            Some(SetExpr::Description {
                lower: BoundExpr {
                    value: Some(int(0)),
                    inclusive: true
                },
                upper: BoundExpr {
                    value: Some(int(1)),
                    inclusive: true
                },
                gen: int(1),
                primes: vec![2],
                base: int(0),
            })
        );

        let p = parse("Z; {0,3,6,9}@window[0,9]; decompose x=0").unwrap();
        assert_eq!(p.group, Some(GroupExpr::Zed));
        assert!(matches!(
            p.set,
            Some(SetExpr::Explicit {
                window: Some((0, 9)),
                ..
            })
        ));
        assert_eq!(
            p.command,
            Command::Decompose(DecomposeArgs {
                x: Some(ElemExpr::Scalar(int(0))),
                ..Default::default()
            })
        );
    }

    #[test]
    fn more_forms() {
        let p = parse("Z(2x3); {(0,0),(1,2)}; trace x=(0,0) g=(1,1)").unwrap();
        assert_eq!(p.group, Some(GroupExpr::Finite(vec![2, 3])));
        assert_eq!(
            p.command,
            Command::Trace {
                x: ElemExpr::Tuple(vec![0, 0]),
                g: ElemExpr::Tuple(vec![1, 1])
            }
        );
        let p = parse("verify --theorem 2 --max-order 12").unwrap();
        assert_eq!(p.group, None);
        assert_eq!(
            p.command,
            Command::Verify(
                Theorem::Two,
                VerifyArgs {
                    max_order: Some(12),
                    ..Default::default()
                }
            )
        );
        let p = parse(
            "Q(gen=3/2, primes=[]); conv(-inf,5/2) & ((3,[]) + -3/2); decompose --window[-6,2]",
        )
        .unwrap();
        assert_eq!(
            p.set,
            Some(SetExpr::Description {
                lower: BoundExpr {
                    value: None,
                    inclusive: false
                },
                upper: BoundExpr {
                    value: Some(rat(5, 2)),
                    inclusive: false
                },
                gen: int(3),
                primes: vec![],
                base: rat(-3, 2),
            })
        );
        assert!(parse("# comment\nZ(4);\n{0};\ncheck;\n").is_ok());
    }

    #[test]
    fn syntax_errors_have_positions() {
        match parse("Z(15); {1,4,,7}; check") {
            Err(DslError::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 13)),
            other => panic!("{other:?}"),
        }
        match parse("Z(4);\n{0};\nchek") {
            Err(DslError::Syntax {
                line,
                column,
                message,
            }) => {
                assert_eq!((line, column), (3, 1));
                assert!(message.contains("chek"));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse("Z(4); {0}").is_err());
        assert!(parse("{0}; check").is_err());
        assert!(parse("verify --theorem 4").is_err());
        assert!(parse("Q(gen=1/0, primes=[]); check").is_err());
        assert!(parse("Z(4); {0}; check; check").is_err());
        assert!(parse("verify --theorem 2 --seed 1 --seed 2").is_err());
    }

    #[test]
    fn print_parse_roundtrip_examples() {
        for src in [
            "Z(15); {1,4,7,10,13}; check",
            "Z(2x3); {(0,0),(1,2)}; trace x=(0,0) g=(1,1)",
            "Z; {0,3,6,9}@window[0,9]; decompose x=0",
            "Q(gen=1, primes=[2]); conv[0,1] ∩ ((1,[2]) + 0); check --samples 10 --seed 3",
            "Q(gen=1/3, primes=[3,5]); conv(-inf,inf) ∩ ((2/3,[3]) + 1/3); decompose x=1/3 x2=1 --depth 4 --window[-2,2]",
            "Q(gen=1, primes=[]); {0,2}; closure --rounds 3",
            "verify --theorem hull --max-order 3 --samples 4 --seed 5 --rounds 6",
            "Z; {}@window[0,0]; check",
        ] {
            let p = parse(src).unwrap();
            assert_eq!(p.to_string(), src);
            assert_eq!(parse(&p.to_string()).unwrap(), p);
        }
    }
}
