//! Small hand-built families whose kernels, code languages, and closed
//! forms are known exactly. They exercise corners the big families do not:
//! a kernel with several elements and no zero, a kernel that is a single
//! zero, a semigroup that is not R-trivial, and first-passage languages
//! with two-sided structure.

use super::{
    assemble_map_model, min_positive_prob, ChainBuilder, ChainModel, ChainParams,
};
use crate::bounds::StatisticParams;
use crate::error::{Error, Result};
use crate::ratio::Q;
use crate::transform::{Alphabet, Transformation};
use num::traits::{One, Zero};

fn reject_poset(params: &ChainParams, what: &str) -> Result<()> {
    if params.poset.is_some() {
        return Err(Error::Invalid(format!("{what} does not take a poset")));
    }
    Ok(())
}

fn reject_n(params: &ChainParams, what: &str) -> Result<()> {
    if params.n.is_some() {
        return Err(Error::Invalid(format!(
            "{what} does not take a size parameter"
        )));
    }
    Ok(())
}

/// Letter k sends x to min(x, k) on the states 0..=n. The kernel is the
/// single constant at 0, absorption is the first draw of letter 0, and the
/// survival curve is exactly geometric.
pub struct MinChain;

impl ChainBuilder for MinChain {
    fn name(&self) -> &'static str {
        "min"
    }

    fn describe(&self) -> &'static str {
        "minimum walk on 0..=n (letter k sends x to min(x, k); --n states above zero)"
    }

    fn build(&self, params: &ChainParams) -> Result<ChainModel> {
        reject_poset(params, "min")?;
        let n = params.n.unwrap_or(4);
        if n == 0 {
            return Err(Error::Invalid("need at least one state above zero".into()));
        }
        let probs = params.resolve_probs(n + 1, "min")?;
        let labels: Vec<String> = (0..=n).map(|k| k.to_string()).collect();
        let alphabet = Alphabet::new(labels, Some(probs.clone()))?;
        let state_names: Vec<String> = (0..=n).map(|x| x.to_string()).collect();
        let generators = (0..=n)
            .map(|k| Transformation::new((0..=n).map(|x| x.min(k)).collect()))
            .collect::<Result<Vec<_>>>()?;
        let mut model = assemble_map_model("min", alphabet, generators, state_names)?;
        model.closed_form = Some(vec![Q::one()]);
        model.statistic = Some(StatisticParams {
            success: probs[0].clone(),
            level: 1,
        });
        Ok(model)
    }
}

/// Two letters with every squared letter equal to zero and aba = a,
/// bab = b. The walk dies on the first squared factor, so the code words
/// alternate letters and then double the last one.
pub struct SquareFree;

impl ChainBuilder for SquareFree {
    fn name(&self) -> &'static str {
        "b2"
    }

    fn describe(&self) -> &'static str {
        "two letters where any squared letter kills the word (aa = bb = 0, aba = a, bab = b)"
    }

    fn build(&self, params: &ChainParams) -> Result<ChainModel> {
        reject_poset(params, "b2")?;
        reject_n(params, "b2")?;
        let probs = params.resolve_probs(2, "b2")?;
        let alphabet = Alphabet::new(
            vec!["a".to_string(), "b".to_string()],
            Some(probs.clone()),
        )?;
        let state_names: Vec<String> = ["1", "a", "b", "ab", "ba", "0"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let generators = vec![
            Transformation::new(vec![1, 5, 3, 5, 1, 5])?,
            Transformation::new(vec![2, 4, 5, 2, 5, 5])?,
        ];
        let mut model = assemble_map_model("b2", alphabet, generators, state_names)?;
        model.closed_form = Some(vec![Q::one()]);
        model.statistic = Some(StatisticParams {
            success: min_positive_prob(&probs)?,
            level: 2,
        });
        Ok(model)
    }
}

/// Two letters with aa = 0, bb = b, aba = a, bab = b. The walk dies on the
/// first aa factor; every other product is pinned by its first and last
/// letters.
pub struct ReesAa;

impl ChainBuilder for ReesAa {
    fn name(&self) -> &'static str {
        "rees-aa"
    }

    fn describe(&self) -> &'static str {
        "two letters where only a doubled a kills the word (aa = 0, bb = b)"
    }

    fn build(&self, params: &ChainParams) -> Result<ChainModel> {
        reject_poset(params, "rees-aa")?;
        reject_n(params, "rees-aa")?;
        let probs = params.resolve_probs(2, "rees-aa")?;
        let alphabet = Alphabet::new(
            vec!["a".to_string(), "b".to_string()],
            Some(probs.clone()),
        )?;
        let state_names: Vec<String> = ["1", "a", "b", "ab", "ba", "0"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let generators = vec![
            Transformation::new(vec![1, 5, 3, 5, 1, 5])?,
            Transformation::new(vec![2, 4, 2, 2, 4, 5])?,
        ];
        let mut model = assemble_map_model("rees-aa", alphabet, generators, state_names)?;
        model.closed_form = Some(vec![Q::one()]);
        model.statistic = None;
        Ok(model)
    }
}

/// One letter resets to a, the other climbs powers of b that stop growing
/// at b^w. The kernel collects the w+1 left zeros b^j a, so the chain has
/// several targets and no zero element.
pub struct PowerCollapse;

impl ChainBuilder for PowerCollapse {
    fn name(&self) -> &'static str {
        "bw"
    }

    fn describe(&self) -> &'static str {
        "reset letter a against a power chain b, b^2, .., b^w (--n sets w)"
    }

    fn build(&self, params: &ChainParams) -> Result<ChainModel> {
        reject_poset(params, "bw")?;
        let w = params.n.unwrap_or(3);
        if w == 0 {
            return Err(Error::Invalid("need at least one power of b".into()));
        }
        let probs = params.resolve_probs(2, "bw")?;
        let alphabet = Alphabet::new(
            vec!["a".to_string(), "b".to_string()],
            Some(probs.clone()),
        )?;
        // States 0..=w are 1, b, .., b^w; states w+1..=2w+1 are a, ba, .., b^w a.
        let power_name = |j: usize, tail: &str| format!("{}{}", "b".repeat(j), tail);
        let mut state_names: Vec<String> = vec!["1".to_string()];
        state_names.extend((1..=w).map(|j| power_name(j, "")));
        state_names.extend((0..=w).map(|j| power_name(j, "a")));
        let reset = Transformation::constant(2 * w + 2, w + 1);
        let climb = Transformation::new(
            std::iter::once(1)
                .chain((1..=w).map(|j| (j + 1).min(w)))
                .chain((0..=w).map(|j| w + 1 + (j + 1).min(w)))
                .collect(),
        )?;
        let mut model =
            assemble_map_model("bw", alphabet, vec![reset, climb], state_names)?;

        let x_a = probs[0].clone();
        let x_b = probs[1].clone();
        let tail_denom = Q::one() - &x_b;
        if !tail_denom.is_zero() {
            let closed = model
                .states
                .as_ref()
                .expect("map model has states")
                .kernel_values
                .iter()
                .map(|&v| {
                    let j = v - (w + 1);
                    let run = num::pow(x_b.clone(), j);
                    if j < w {
                        x_a.clone() * run
                    } else {
                        x_a.clone() * run / tail_denom.clone()
                    }
                })
                .collect();
            model.closed_form = Some(closed);
        }
        model.statistic = Some(StatisticParams {
            success: probs[0].clone(),
            level: 1,
        });
        Ok(model)
    }
}

/// Two constant letters and a swap on two states. The swap is invertible,
/// so the semigroup is not R-trivial, and the landing side depends on the
/// parity of the swaps before the first constant.
pub struct FlipConst;

impl ChainBuilder for FlipConst {
    fn name(&self) -> &'static str {
        "linear2"
    }

    fn describe(&self) -> &'static str {
        "two constants and a swap on two states (letters c1, c2, s)"
    }

    fn build(&self, params: &ChainParams) -> Result<ChainModel> {
        reject_poset(params, "linear2")?;
        reject_n(params, "linear2")?;
        let probs = params.resolve_probs(3, "linear2")?;
        let alphabet = Alphabet::new(
            vec!["c1".to_string(), "c2".to_string(), "s".to_string()],
            Some(probs.clone()),
        )?;
        let state_names = vec!["1".to_string(), "2".to_string()];
        let generators = vec![
            Transformation::constant(2, 0),
            Transformation::constant(2, 1),
            Transformation::new(vec![1, 0])?,
        ];
        let mut model = assemble_map_model("linear2", alphabet, generators, state_names)?;

        let (x1, x2, xs) = (probs[0].clone(), probs[1].clone(), probs[2].clone());
        let denom = Q::one() - xs.clone() * xs.clone();
        if !denom.is_zero() {
            let closed = model
                .states
                .as_ref()
                .expect("map model has states")
                .kernel_values
                .iter()
                .map(|&v| {
                    let (direct, flipped) = if v == 0 {
                        (x1.clone(), x2.clone())
                    } else {
                        (x2.clone(), x1.clone())
                    };
                    (direct + xs.clone() * flipped) / denom.clone()
                })
                .collect();
            model.closed_form = Some(closed);
        }
        model.statistic = Some(StatisticParams {
            success: probs[0].clone() + probs[1].clone(),
            level: 1,
        });
        Ok(model)
    }
}
