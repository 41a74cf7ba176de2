//! Exact and approximate solvers for 0/1 knapsack and the multiple
//! choice problem.
//!
//! Rational inputs are mapped onto a common integer weight grid derived
//! from the input denominators, so optima like a budget hit at exactly
//! one decimal place come out exact. Exact solvers use weight-indexed
//! dynamic programming with suffix tables so the reported optimum is the
//! lexicographically smallest id tuple among ties; the approximation
//! schemes use profit scaling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{denominator_lcm, Rat};

/// Knapsack item: `profit` is the objective contribution, `weight` the
/// resource consumption.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub id: String,
    pub profit: Rat,
    pub weight: Rat,
}

/// Grouped options with one-pick-per-group semantics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceGroup {
    pub name: String,
    pub options: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceInstance {
    pub groups: Vec<ChoiceGroup>,
    pub budget: Rat,
}

impl ChoiceInstance {
    pub fn validate(&self) -> Result<()> {
        if self.budget.is_negative() {
            return Err(Error::validation("budget", "budget must be nonnegative"));
        }
        for (gi, group) in self.groups.iter().enumerate() {
            if group.options.is_empty() {
                return Err(Error::validation(
                    format!("groups[{gi}].options"),
                    "every group needs at least one option",
                ));
            }
            for (oi, opt) in group.options.iter().enumerate() {
                if opt.profit.is_negative() || opt.weight.is_negative() {
                    return Err(Error::validation(
                        format!("groups[{gi}].options[{oi}]"),
                        "profit and weight must be nonnegative",
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Chosen option ids plus recomputed totals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selection {
    pub chosen: Vec<String>,
    pub total_profit: Rat,
    pub total_weight: Rat,
}

impl Selection {
    fn from_items<'a>(items: impl IntoIterator<Item = &'a Item>) -> Selection {
        let mut chosen = Vec::new();
        let mut total_profit = Rat::ZERO;
        let mut total_weight = Rat::ZERO;
        for item in items {
            chosen.push(item.id.clone());
            total_profit += item.profit;
            total_weight += item.weight;
        }
        Selection {
            chosen,
            total_profit,
            total_weight,
        }
    }

    pub fn empty() -> Selection {
        Selection {
            chosen: Vec::new(),
            total_profit: Rat::ZERO,
            total_weight: Rat::ZERO,
        }
    }
}

fn validate_items(items: &[Item]) -> Result<()> {
    for (i, item) in items.iter().enumerate() {
        if item.profit.is_negative() || item.weight.is_negative() {
            return Err(Error::validation(
                format!("items[{i}]"),
                "profit and weight must be nonnegative",
            ));
        }
    }
    Ok(())
}

const GRID_CELLS: i128 = 4_000_000;

/// Scales weights and the budget to a common integer grid.
fn weight_grid<'a>(weights: impl IntoIterator<Item = &'a Rat>, budget: Rat, rows: usize) -> Result<(Vec<i128>, i128)> {
    let weights: Vec<&Rat> = weights.into_iter().collect();
    let scale = denominator_lcm(weights.iter().copied().chain([&budget]));
    let capacity = (budget * Rat::from_int(scale)).floor().max(0);
    if (capacity + 1) * (rows as i128 + 1) > GRID_CELLS {
        return Err(Error::TooLargeForExact(format!(
            "scaled weight grid of {capacity} cells x {rows} rows",
        )));
    }
    let scaled = weights
        .into_iter()
        .map(|w| (*w * Rat::from_int(scale)).floor())
        .collect();
    Ok((scaled, capacity))
}

/// Profit-maximal feasible subset; ties resolve to the lexicographically
/// smallest chosen-id tuple (ids compared as strings, in ascending order).
pub fn knapsack_exact(items: &[Item], budget: Rat) -> Result<Selection> {
    validate_items(items)?;
    if budget.is_negative() {
        return Err(Error::validation("budget", "budget must be nonnegative"));
    }
    // sort by id so the DP walk enumerates tuples in lexicographic order
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| items[a].id.cmp(&items[b].id));
    let sorted: Vec<&Item> = order.iter().map(|&i| &items[i]).collect();

    let (weights, capacity) = weight_grid(sorted.iter().map(|it| &it.weight), budget, items.len())?;
    let n = sorted.len();
    let cap = capacity as usize;
    // dp[i][w]: best profit using items i.. with remaining capacity w
    let mut dp = vec![vec![Rat::ZERO; cap + 1]; n + 1];
    for i in (0..n).rev() {
        for w in 0..=cap {
            let mut best = dp[i + 1][w];
            let need = weights[i];
            if need >= 0 && (need as usize) <= w {
                let take = sorted[i].profit + dp[i + 1][w - need as usize];
                if take > best {
                    best = take;
                }
            }
            dp[i][w] = best;
        }
    }
    let target = dp[0][cap];
    let mut chosen = Vec::new();
    let mut w = cap;
    let mut acc = Rat::ZERO;
    for i in 0..n {
        if acc == target {
            break; // the empty completion is optimal and lex-least
        }
        let need = weights[i] as usize;
        if weights[i] >= 0 && need <= w && acc + sorted[i].profit + dp[i + 1][w - need] == target {
            chosen.push(sorted[i]);
            acc += sorted[i].profit;
            w -= need;
        }
    }
    Ok(Selection::from_items(chosen))
}

/// (1 - epsilon)-approximate knapsack via profit scaling.
pub fn knapsack_fptas(items: &[Item], budget: Rat, epsilon: Rat) -> Result<Selection> {
    validate_items(items)?;
    check_epsilon(epsilon)?;
    let fitting: Vec<&Item> = items.iter().filter(|it| it.weight <= budget).collect();
    let n = fitting.len();
    let top = fitting
        .iter()
        .map(|it| it.profit)
        .max()
        .unwrap_or(Rat::ZERO);
    if top.is_zero() {
        return Ok(Selection::empty());
    }
    let unit = epsilon * top / Rat::from(n);
    let scaled: Vec<i128> = fitting
        .iter()
        .map(|it| (it.profit / unit).floor().max(0))
        .collect();
    let q_max: i128 = scaled.iter().sum();
    // one dp layer per processed item: scaled profit -> minimal weight
    let mut layers: Vec<Vec<Option<Rat>>> = Vec::with_capacity(n + 1);
    let mut layer: Vec<Option<Rat>> = vec![None; q_max as usize + 1];
    layer[0] = Some(Rat::ZERO);
    layers.push(layer.clone());
    for (i, item) in fitting.iter().enumerate() {
        let mut next = layer.clone();
        let gain = scaled[i] as usize;
        for q in 0..layer.len() {
            let Some(weight) = layer[q] else { continue };
            let nq = q + gain;
            let nw = weight + item.weight;
            if nw <= budget && next[nq].is_none_or(|cur| nw < cur) {
                next[nq] = Some(nw);
            }
        }
        layer = next;
        layers.push(layer.clone());
    }
    let best_q = (0..layer.len())
        .rev()
        .find(|&q| layer[q].is_some())
        .unwrap_or(0);
    // walk the layers backwards, keeping weight bookkeeping consistent
    let mut chosen = Vec::new();
    let mut q = best_q;
    let mut need_weight = layers[n][q].expect("witness profit reachable");
    for i in (0..n).rev() {
        if layers[i][q].is_some_and(|w| w == need_weight) {
            continue; // state already reachable without item i
        }
        let gain = scaled[i] as usize;
        let took = gain <= q
            && layers[i][q - gain].is_some_and(|w| w + fitting[i].weight == need_weight);
        assert!(took, "dp layer mismatch during reconstruction");
        chosen.push(fitting[i]);
        q -= gain;
        need_weight -= fitting[i].weight;
    }
    chosen.reverse();
    Ok(Selection::from_items(chosen))
}

fn check_epsilon(epsilon: Rat) -> Result<()> {
    if epsilon <= Rat::ZERO || epsilon >= Rat::ONE {
        return Err(Error::InvalidEpsilon(epsilon.to_string()));
    }
    Ok(())
}

/// Profit-maximal selection with exactly one option per group and total
/// weight within budget; `Infeasible` when no combination fits.
pub fn multiple_choice_exact(instance: &ChoiceInstance) -> Result<Selection> {
    instance.validate()?;
    // options sorted by id inside each group for the lexicographic walk
    let groups: Vec<Vec<&Item>> = instance
        .groups
        .iter()
        .map(|g| {
            let mut opts: Vec<&Item> = g.options.iter().collect();
            opts.sort_by(|a, b| a.id.cmp(&b.id));
            opts
        })
        .collect();
    let all_weights: Vec<&Rat> = groups
        .iter()
        .flat_map(|g| g.iter().map(|it| &it.weight))
        .collect();
    let rows = groups.len();
    let (scaled_flat, capacity) = weight_grid(all_weights, instance.budget, rows)?;
    let mut scaled_by_group: Vec<Vec<i128>> = Vec::with_capacity(rows);
    let mut cursor = 0;
    for g in &groups {
        scaled_by_group.push(scaled_flat[cursor..cursor + g.len()].to_vec());
        cursor += g.len();
    }
    let cap = capacity as usize;
    // dp[i][w]: best profit choosing one option from every group i.. within w
    let mut dp: Vec<Vec<Option<Rat>>> = vec![vec![None; cap + 1]; rows + 1];
    for w in 0..=cap {
        dp[rows][w] = Some(Rat::ZERO);
    }
    for i in (0..rows).rev() {
        for w in 0..=cap {
            let mut best: Option<Rat> = None;
            for (oi, opt) in groups[i].iter().enumerate() {
                let need = scaled_by_group[i][oi];
                if need as usize > w {
                    continue;
                }
                if let Some(rest) = dp[i + 1][w - need as usize] {
                    let total = opt.profit + rest;
                    if best.is_none_or(|b| total > b) {
                        best = Some(total);
                    }
                }
            }
            dp[i][w] = best;
        }
    }
    let Some(target) = dp[0][cap] else {
        return Err(Error::Infeasible(
            "no option combination fits the budget".into(),
        ));
    };
    let mut chosen = Vec::new();
    let mut w = cap;
    let mut acc = Rat::ZERO;
    for i in 0..rows {
        let mut picked = None;
        for (oi, opt) in groups[i].iter().enumerate() {
            let need = scaled_by_group[i][oi] as usize;
            if need <= w {
                if let Some(rest) = dp[i + 1][w - need] {
                    if acc + opt.profit + rest == target {
                        picked = Some((oi, *opt));
                        break; // options are in ascending id order
                    }
                }
            }
        }
        let (oi, opt) = picked.expect("dp guarantees a feasible completion");
        chosen.push(opt);
        acc += opt.profit;
        w -= scaled_by_group[i][oi] as usize;
    }
    Ok(Selection::from_items(chosen))
}

/// (1 - epsilon)-approximate multiple choice via profit scaling.
pub fn multiple_choice_fptas(instance: &ChoiceInstance, epsilon: Rat) -> Result<Selection> {
    instance.validate()?;
    check_epsilon(epsilon)?;
    let groups: Vec<&ChoiceGroup> = instance.groups.iter().collect();
    let m = groups.len();
    if m == 0 {
        return Ok(Selection::empty());
    }
    // cheapest completion per group, used for feasibility and the profit bound
    let min_weight: Vec<Rat> = groups
        .iter()
        .map(|g| g.options.iter().map(|o| o.weight).min().unwrap())
        .collect();
    let min_total: Rat = min_weight.iter().copied().sum();
    if min_total > instance.budget {
        return Err(Error::Infeasible(
            "no option combination fits the budget".into(),
        ));
    }
    // largest profit an option can realize in any feasible selection
    let mut anchor = Rat::ZERO;
    for (gi, g) in groups.iter().enumerate() {
        for opt in &g.options {
            let others = min_total - min_weight[gi];
            if others + opt.weight <= instance.budget && opt.profit > anchor {
                anchor = opt.profit;
            }
        }
    }
    if anchor.is_zero() {
        // optimum is zero; return the cheapest selection deterministically
        let chosen: Vec<&Item> = groups
            .iter()
            .map(|g| {
                g.options
                    .iter()
                    .filter(|o| o.weight == g.options.iter().map(|x| x.weight).min().unwrap())
                    .min_by(|a, b| a.id.cmp(&b.id))
                    .unwrap()
            })
            .collect();
        return Ok(Selection::from_items(chosen));
    }
    let unit = epsilon * anchor / Rat::from(m);
    let scaled: Vec<Vec<i128>> = groups
        .iter()
        .map(|g| {
            g.options
                .iter()
                .map(|o| (o.profit / unit).floor().max(0))
                .collect()
        })
        .collect();
    let q_max: i128 = scaled
        .iter()
        .map(|g| g.iter().max().copied().unwrap_or(0))
        .sum();
    // one dp layer per processed group: scaled profit -> minimal weight
    let mut layers: Vec<Vec<Option<Rat>>> = Vec::with_capacity(m + 1);
    let mut layer: Vec<Option<Rat>> = vec![None; q_max as usize + 1];
    layer[0] = Some(Rat::ZERO);
    layers.push(layer.clone());
    for (gi, g) in groups.iter().enumerate() {
        let mut next: Vec<Option<Rat>> = vec![None; layer.len()];
        for q in 0..layer.len() {
            let Some(weight) = layer[q] else { continue };
            for (oi, opt) in g.options.iter().enumerate() {
                let nq = q + scaled[gi][oi] as usize;
                let nw = weight + opt.weight;
                if nw <= instance.budget && next[nq].is_none_or(|cur| nw < cur) {
                    next[nq] = Some(nw);
                }
            }
        }
        layer = next;
        layers.push(layer.clone());
    }
    let best_q = (0..layers[m].len())
        .rev()
        .find(|&q| layers[m][q].is_some())
        .ok_or_else(|| Error::Infeasible("no option combination fits the budget".into()))?;
    let mut chosen_rev: Vec<&Item> = Vec::new();
    let mut q = best_q;
    let mut need_weight = layers[m][q].expect("witness profit reachable");
    for gi in (0..m).rev() {
        let g = groups[gi];
        let mut found = None;
        for (oi, opt) in g.options.iter().enumerate() {
            let s = scaled[gi][oi] as usize;
            if s > q {
                continue;
            }
            if let Some(prev) = layers[gi][q - s] {
                if prev + opt.weight == need_weight {
                    found = Some((oi, opt));
                    break;
                }
            }
        }
        let (oi, opt) = found.expect("dp layer mismatch");
        chosen_rev.push(opt);
        q -= scaled[gi][oi] as usize;
        need_weight -= opt.weight;
    }
    chosen_rev.reverse();
    Ok(Selection::from_items(chosen_rev))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn item(id: &str, profit: &str, weight: &str) -> Item {
        Item {
            id: id.into(),
            profit: Rat::parse(profit).unwrap(),
            weight: Rat::parse(weight).unwrap(),
        }
    }

    #[test]
    fn empty_instance() {
        let sel = knapsack_exact(&[], Rat::from(5u32)).unwrap();
        assert!(sel.chosen.is_empty());
        assert_eq!(sel.total_profit, Rat::ZERO);
        assert_eq!(sel.total_weight, Rat::ZERO);
    }

    #[test]
    fn everything_fits() {
        let items = vec![item("a", "2", "1"), item("b", "3", "2")];
        let sel = knapsack_exact(&items, Rat::from(5u32)).unwrap();
        assert_eq!(sel.chosen, vec!["a", "b"]);
        assert_eq!(sel.total_profit, Rat::from(5u32));
    }

    #[test]
    fn lexicographic_tie_break() {
        // two disjoint optima of equal profit; "a" must win
        let items = vec![item("b", "4", "3"), item("a", "4", "3")];
        let sel = knapsack_exact(&items, Rat::from(3u32)).unwrap();
        assert_eq!(sel.chosen, vec!["a"]);
    }

    #[test]
    fn fptas_zero_profit() {
        let items = vec![item("a", "0", "1")];
        let sel = knapsack_fptas(&items, Rat::from(2u32), Rat::parse("0.5").unwrap()).unwrap();
        assert_eq!(sel.total_profit, Rat::ZERO);
    }

    #[test]
    fn fptas_single_item_exact() {
        let items = vec![item("a", "7", "3")];
        let sel = knapsack_fptas(&items, Rat::from(3u32), Rat::parse("0.3").unwrap()).unwrap();
        assert_eq!(sel.chosen, vec!["a"]);
        assert_eq!(sel.total_profit, Rat::from(7u32));
    }

    #[test]
    fn invalid_epsilon_rejected() {
        let items = vec![item("a", "1", "1")];
        for eps in ["0", "1", "-0.5", "2"] {
            assert!(matches!(
                knapsack_fptas(&items, Rat::ONE, Rat::parse(eps).unwrap()),
                Err(Error::InvalidEpsilon(_))
            ));
        }
    }

    fn none_option() -> Item {
        item("none", "0", "0")
    }

    #[test]
    fn mchoice_zero_budget_all_none() {
        let instance = ChoiceInstance {
            groups: vec![
                ChoiceGroup {
                    name: "g1".into(),
                    options: vec![none_option(), item("s1", "5", "2")],
                },
                ChoiceGroup {
                    name: "g2".into(),
                    options: vec![none_option(), item("s2", "4", "1")],
                },
            ],
            budget: Rat::ZERO,
        };
        let sel = multiple_choice_exact(&instance).unwrap();
        assert_eq!(sel.chosen, vec!["none", "none"]);
        assert_eq!(sel.total_profit, Rat::ZERO);
    }

    #[test]
    fn mchoice_infeasible_detected() {
        let instance = ChoiceInstance {
            groups: vec![ChoiceGroup {
                name: "g1".into(),
                options: vec![item("s1", "5", "2")],
            }],
            budget: Rat::ONE,
        };
        assert!(matches!(
            multiple_choice_exact(&instance),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            multiple_choice_fptas(&instance, Rat::parse("0.1").unwrap()),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn mchoice_single_group_fptas_exact() {
        let instance = ChoiceInstance {
            groups: vec![ChoiceGroup {
                name: "g1".into(),
                options: vec![none_option(), item("s1", "5", "2"), item("s2", "9", "4")],
            }],
            budget: Rat::from(4u32),
        };
        let sel = multiple_choice_fptas(&instance, Rat::parse("0.2").unwrap()).unwrap();
        assert_eq!(sel.total_profit, Rat::from(9u32));
    }

    #[test]
    fn budget_monotonicity() {
        let items = vec![item("a", "3", "2"), item("b", "4", "3"), item("c", "5", "4")];
        let mut last = Rat::ZERO;
        for b in 0..10 {
            let sel = knapsack_exact(&items, Rat::from(b as u32)).unwrap();
            assert!(sel.total_profit >= last);
            last = sel.total_profit;
        }
    }
}
