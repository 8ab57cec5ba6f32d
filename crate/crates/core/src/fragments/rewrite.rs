//! Rewriting rules on arithmetic fragment strings and cycles, and the closed-form clearing
//! rate of a cycle.
//!
//! - Rule 0 replaces `g_i^{j′}` by `g_i^{a′}` (and `g_i^{j″}` by `g_i^{a″}`).
//! - Rule 1 replaces `g₂^{a′}` by `g₁^{a′}g₁^{a′}` (and `g₂^{a″}` by `g₁^{a″}g₁^{a′}`) when
//!   the follower is one of `g₁^{a′}, g₂^{a′}, g₃^{a′}, d₁′, d₂′`.
//! - Rule 2 replaces a pair `g₃′ g_i^{a″}` (with `g₃′ ∈ {g₃^{a′}, g₃^{a″}}`) by
//!   `g₂^{a′} g_i^{a′}`.
//! - Rule 3 removes a `d₁′` or `d₂′`.
//!
//! Every rule preserves the end-node rate as a function of the start-node rate.

use super::kinds::{Family, Fragment, FragmentKind, FragmentString, Variant};
use super::moebius::compose_cycle;
use crate::error::{Error, Result};
use crate::numeric::QuadraticSurd;

/// Applies `rule` (0–3) at `position`.
pub fn rewrite(c: &FragmentString, rule: u8, position: usize) -> Result<FragmentString> {
    let fail = |reason: &str| Error::RuleNotApplicable {
        rule,
        position,
        reason: reason.to_string(),
    };
    if position >= c.len() {
        return Err(fail("position out of range"));
    }
    let frags = c.fragments();
    let here = frags[position];
    if !here.is_arithmetic() {
        return Err(fail("fragment has no coefficients"));
    }
    let mut out: Vec<Fragment> = frags.to_vec();
    match rule {
        0 => {
            if !here.kind.is_g() || here.kind.letter() == Some('a') {
                return Err(fail(
                    "rule 0 applies to g fragments other than the a members",
                ));
            }
            out[position] = Fragment {
                kind: here.kind.a_member(),
                variant: here.variant,
            };
        }
        1 => {
            if here.kind != FragmentKind::G2a {
                return Err(fail("rule 1 applies to g2a' and g2a''"));
            }
            let follower = c
                .follower_index(position)
                .map(|j| frags[j])
                .ok_or_else(|| fail("no follower"))?;
            let allowed = follower.variant == Variant::Prime
                && matches!(
                    follower.kind,
                    FragmentKind::G1a
                        | FragmentKind::G2a
                        | FragmentKind::G3a
                        | FragmentKind::D1
                        | FragmentKind::D2
                );
            if !allowed {
                return Err(fail("follower must be one of g1a', g2a', g3a', d1', d2'"));
            }
            let first = Fragment {
                kind: FragmentKind::G1a,
                variant: here.variant,
            };
            out.splice(
                position..=position,
                [first, Fragment::prime(FragmentKind::G1a)],
            );
        }
        2 => {
            if here.kind != FragmentKind::G3a {
                return Err(fail("rule 2 applies to a pair starting with g3a' or g3a''"));
            }
            let j = c
                .follower_index(position)
                .ok_or_else(|| fail("no follower"))?;
            if j == position {
                return Err(fail("a g3 fragment cannot follow itself"));
            }
            let next = frags[j];
            if !(next.kind.is_g()
                && next.kind.letter() == Some('a')
                && next.variant == Variant::DoublePrime)
            {
                return Err(fail("the second fragment must be a double-primed a member"));
            }
            out[position] = Fragment::prime(FragmentKind::G2a);
            out[j] = Fragment::prime(next.kind);
        }
        3 => {
            if !matches!(here.kind.family(), Family::D1 | Family::D2) {
                return Err(fail("rule 3 removes d1' or d2'"));
            }
            if c.len() == 1 {
                return Err(fail("cannot remove the only fragment"));
            }
            out.remove(position);
        }
        _ => return Err(fail("unknown rule")),
    }
    Ok(FragmentString::from_parts(out, c.is_closed()))
}

fn apply_everywhere(
    mut c: FragmentString,
    rule: u8,
    applies: impl Fn(&FragmentString, usize) -> bool,
) -> Result<FragmentString> {
    while let Some(p) = (0..c.len()).find(|&p| applies(&c, p)) {
        c = rewrite(&c, rule, p)?;
    }
    Ok(c)
}

/// Rewrites an arithmetic cycle to copies of `g₁^{a′}` by applying Rules 0, 3, 2 and 1
/// exhaustively, in that order. Fails with [`Error::NotRewritable`] when something else
/// remains.
pub fn rewrite_to_canonical(c: &FragmentString) -> Result<FragmentString> {
    if !c.is_arithmetic() {
        return Err(Error::NotRewritable(format!(
            "{c} has fragments without coefficients"
        )));
    }
    let ok = |c: &FragmentString, p: usize, rule: u8| rewrite(c, rule, p).is_ok();
    let c = apply_everywhere(c.clone(), 0, |c, p| ok(c, p, 0))?;
    let c = apply_everywhere(c, 3, |c, p| ok(c, p, 3))?;
    let c = apply_everywhere(c, 2, |c, p| ok(c, p, 2))?;
    let c = apply_everywhere(c, 1, |c, p| ok(c, p, 1))?;
    let canonical = c
        .fragments()
        .iter()
        .all(|f| *f == Fragment::prime(FragmentKind::G1a));
    if !canonical {
        return Err(Error::NotRewritable(format!("rules 0, 3, 2, 1 leave {c}")));
    }
    Ok(c)
}

/// The unique clearing rate of the start node of an arithmetic cycle, assuming the
/// `c`-labelled banks clear at 0: the cycle is rewritten to `k` copies of `g₁^{a′}` and the
/// fixed point in `[0, 1]` of the composed transfer map is returned (for such cycles the
/// fixed-point equation reduces to `r² − 3r + 1 = 0`, whatever `k`).
pub fn solve_cycle_closed_form(c: &FragmentString) -> Result<QuadraticSurd> {
    if !c.is_closed() {
        return Err(Error::NotRewritable(
            "only closed cycles have a clearing rate".into(),
        ));
    }
    let canonical = rewrite_to_canonical(c)?;
    let map = compose_cycle(&canonical)?;
    let roots = map.fixed_points_in_unit_interval()?;
    match roots.as_slice() {
        [r] => Ok(r.clone()),
        _ => Err(Error::NotRewritable(format!(
            "{} fixed points of {map} in [0, 1]",
            roots.len()
        ))),
    }
}
