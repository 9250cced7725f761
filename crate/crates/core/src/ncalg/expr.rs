use super::{Ctx, SmashElement};
use crate::syntax::{parse_expr, Expr, Factor, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Invalid(String),
}

/// Parse an expression such as `3/5 * zeta(25)^5 * a1 a2 a1 * g[1,0]` into
/// an element of the smash product (not reduced).
pub fn parse_element(ctx: &Ctx, src: &str) -> Result<SmashElement, ExprError> {
    let e = parse_expr(src)?;
    build(ctx, &e)
}

fn build(ctx: &Ctx, e: &Expr) -> Result<SmashElement, ExprError> {
    let mut acc = ctx.zero();
    for t in &e.terms {
        let mut prod = ctx.one();
        for f in &t.factors {
            let v = match f {
                Factor::Number(r) => ctx.scalar(ctx.field().rational(r.clone())),
                Factor::Zeta { order, exp } => ctx.scalar(
                    ctx.field().root_of_unity(*order, *exp).map_err(|e| ExprError::Invalid(e.to_string()))?,
                ),
                Factor::Letter { index, power } => {
                    if *index > ctx.num_letters() {
                        return Err(ExprError::Invalid(format!(
                            "letter a{index} out of range (datum has {} letters)",
                            ctx.num_letters()
                        )));
                    }
                    ctx.word(&vec![(*index - 1) as u8; *power as usize])
                }
                Factor::Group(exps) => {
                    let g = ctx.group().element(exps).map_err(|e| ExprError::Invalid(e.to_string()))?;
                    ctx.group_element(ctx.index(&g))
                }
                Factor::Paren(inner) => build(ctx, inner)?,
            };
            prod = &prod * &v;
        }
        if t.negative {
            acc -= &prod;
        } else {
            acc += &prod;
        }
    }
    Ok(acc)
}
