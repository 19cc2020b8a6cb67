//! The Hoeffding tree learner and its strict variants.

use std::collections::BTreeSet;
use std::fmt;
use std::mem::size_of;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dist::ClassDistribution;
use crate::error::{Error, Result};
use crate::observers::{AttributeObserver, SplitCandidate, SplitTest, DEFAULT_BINS};
use crate::schema::{Instance, Schema};
use crate::stats::{entropy, gain_range, hoeffding_bound};
use crate::svfdt::{
    leaf_entropy_stats, GateOutcome, GrowthStatistics, LeafId, SkipRule, SplitCheck, SvfdtVariant,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LeafPrediction {
    #[default]
    #[serde(rename = "mc")]
    MajorityClass,
    #[serde(rename = "nb")]
    NaiveBayes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "vfdt")]
    Vfdt,
    #[serde(rename = "svfdt-i")]
    SvfdtI,
    #[serde(rename = "svfdt-ii")]
    SvfdtII,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Vfdt, Algorithm::SvfdtI, Algorithm::SvfdtII];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Vfdt => "vfdt",
            Algorithm::SvfdtI => "svfdt-i",
            Algorithm::SvfdtII => "svfdt-ii",
        }
    }

    pub fn variant(self) -> Option<SvfdtVariant> {
        match self {
            Algorithm::Vfdt => None,
            Algorithm::SvfdtI => Some(SvfdtVariant::I),
            Algorithm::SvfdtII => Some(SvfdtVariant::II),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::config(
                    "algorithm",
                    format!("unknown algorithm `{s}` (expected vfdt, svfdt-i or svfdt-ii)"),
                )
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TreeConfig {
    /// Weight a leaf must gather after its last check before checking again.
    pub grace_period: u32,
    pub delta: f64,
    pub tie_threshold: f64,
    pub leaf_prediction: LeafPrediction,
    pub numeric_bins: usize,
    /// Combination of the two skip predicates of variant II.
    pub skip_rule: SkipRule,
    /// Keep updating the observers of deactivated attributes so naive Bayes
    /// leaves can still use them. They never compete for a split again.
    pub retain_deactivated: bool,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            grace_period: 200,
            delta: 1e-5,
            tie_threshold: 0.05,
            leaf_prediction: LeafPrediction::MajorityClass,
            numeric_bins: DEFAULT_BINS,
            skip_rule: SkipRule::All,
            retain_deactivated: false,
        }
    }
}

impl TreeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grace_period < 1 {
            return Err(Error::config("grace_period", "must be at least 1"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::config(
                "delta",
                format!("must lie in (0, 1), got {}", self.delta),
            ));
        }
        if !(self.tie_threshold >= 0.0) {
            return Err(Error::config(
                "tie_threshold",
                format!("must be non-negative, got {}", self.tie_threshold),
            ));
        }
        if self.numeric_bins < 1 {
            return Err(Error::config("numeric_bins", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSize {
    pub nodes: usize,
    pub leaves: usize,
    pub depth: usize,
}

#[derive(Debug, Clone)]
pub struct LeafNode {
    id: LeafId,
    dist: ClassDistribution,
    /// `None` for attributes used by a nominal split above or deactivated here.
    observers: Vec<Option<AttributeObserver>>,
    /// Attributes a nominal split above this leaf already consumed.
    excluded: Vec<bool>,
    weight_at_last_check: f64,
    deactivated: BTreeSet<usize>,
}

impl LeafNode {
    fn new(
        id: LeafId,
        dist: ClassDistribution,
        excluded: Vec<bool>,
        schema: &Schema,
        bins: usize,
    ) -> Self {
        let observers = schema
            .attributes()
            .iter()
            .zip(&excluded)
            .map(|(a, &skip)| {
                (!skip).then(|| AttributeObserver::for_kind(&a.kind, schema.class_count(), bins))
            })
            .collect();
        let weight_at_last_check = dist.total();
        LeafNode {
            id,
            dist,
            observers,
            excluded,
            weight_at_last_check,
            deactivated: BTreeSet::new(),
        }
    }

    pub fn id(&self) -> LeafId {
        self.id
    }

    pub fn dist(&self) -> &ClassDistribution {
        &self.dist
    }

    /// Weight routed here, including what was inherited when it was created.
    pub fn weight_seen(&self) -> f64 {
        self.dist.total()
    }

    pub fn weight_at_last_check(&self) -> f64 {
        self.weight_at_last_check
    }

    /// Attributes removed from consideration at this leaf.
    pub fn deactivated(&self) -> &BTreeSet<usize> {
        &self.deactivated
    }

    pub fn observer(&self, attribute: usize) -> Option<&AttributeObserver> {
        self.observers[attribute].as_ref()
    }

    fn learn(&mut self, instance: &Instance, class: usize) -> Result<()> {
        self.dist.add(class, instance.weight);
        for (value, observer) in instance.values.iter().zip(&mut self.observers) {
            if let Some(observer) = observer {
                observer.observe(*value, class, instance.weight)?;
            }
        }
        Ok(())
    }

    /// Class and per-class scores.
    pub fn predict(&self, mode: LeafPrediction, instance: &Instance) -> (usize, Vec<f64>) {
        let classes = self.dist.class_count();
        if self.dist.total() <= 0.0 {
            return (0, vec![1.0 / classes as f64; classes]);
        }
        if mode == LeafPrediction::NaiveBayes {
            if let Some(scores) = self.naive_bayes(instance) {
                return (argmax(&scores), scores);
            }
        }
        let scores: Vec<f64> = self
            .dist
            .weights()
            .iter()
            .map(|w| w / self.dist.total())
            .collect();
        (self.dist.majority_class(), scores)
    }

    /// Normalised posterior, or `None` when every class has zero likelihood.
    fn naive_bayes(&self, instance: &Instance) -> Option<Vec<f64>> {
        let total = self.dist.total();
        let mut log_scores: Vec<f64> = self
            .dist
            .weights()
            .iter()
            .map(|&w| (w / total).ln())
            .collect();
        for (value, observer) in instance.values.iter().zip(&self.observers) {
            let Some(observer) = observer else { continue };
            for (class, score) in log_scores.iter_mut().enumerate() {
                if *score > f64::NEG_INFINITY {
                    *score += observer.likelihood(*value, class).ln();
                }
            }
        }
        let max = log_scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return None;
        }
        let mut scores: Vec<f64> = log_scores.iter().map(|s| (s - max).exp()).collect();
        let sum: f64 = scores.iter().sum();
        scores.iter_mut().for_each(|s| *s /= sum);
        Some(scores)
    }

    fn estimated_bytes(&self) -> usize {
        size_of::<Node>()
            + self.dist.class_count() * size_of::<f64>()
            + self.excluded.len()
            + self
                .observers
                .iter()
                .map(|o| {
                    o.as_ref().map_or(
                        size_of::<Option<AttributeObserver>>(),
                        AttributeObserver::estimated_bytes,
                    )
                })
                .sum::<usize>()
    }
}

fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone)]
pub struct SplitNode {
    pub attribute: usize,
    pub test: SplitTest,
    /// Node indices, one per branch of `test`.
    pub children: Vec<usize>,
}

#[derive(Debug, Clone)]
pub enum Node {
    Leaf(LeafNode),
    Split(SplitNode),
}

/// One performed split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitEvent {
    /// 1-based index of the training instance that triggered it.
    pub instance: u64,
    pub attribute: usize,
    pub merit: f64,
}

/// Counters over all split checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCounters {
    pub attempts: u64,
    /// Attempts with a positive-merit candidate, which reach the split gate.
    pub gated: u64,
    pub vfdt_satisfied: u64,
    pub splits: u64,
}

/// A Hoeffding tree. With `Algorithm::SvfdtI`/`SvfdtII` every split that the
/// Hoeffding test allows must also pass the strict growth gates.
#[derive(Debug, Clone)]
pub struct HoeffdingTree {
    schema: Schema,
    config: TreeConfig,
    algorithm: Algorithm,
    nodes: Vec<Node>,
    growth: Option<GrowthStatistics>,
    next_leaf_id: LeafId,
    instances_seen: u64,
    trained_weight: f64,
    counters: SplitCounters,
    split_log: Vec<SplitEvent>,
}

impl HoeffdingTree {
    pub fn new(schema: Schema, config: TreeConfig, algorithm: Algorithm) -> Result<Self> {
        config.validate()?;
        let growth = algorithm.variant().map(|_| GrowthStatistics::new());
        let mut tree = HoeffdingTree {
            nodes: Vec::new(),
            growth,
            next_leaf_id: 0,
            instances_seen: 0,
            trained_weight: 0.0,
            counters: SplitCounters::default(),
            split_log: Vec::new(),
            schema,
            config,
            algorithm,
        };
        let excluded = vec![false; tree.schema.attribute_count()];
        let root = tree.new_leaf(ClassDistribution::new(tree.schema.class_count()), excluded);
        tree.push_leaf(root);
        Ok(tree)
    }

    pub fn vfdt(schema: Schema, config: TreeConfig) -> Result<Self> {
        HoeffdingTree::new(schema, config, Algorithm::Vfdt)
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn config(&self) -> &TreeConfig {
        &self.config
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn growth_statistics(&self) -> Option<&GrowthStatistics> {
        self.growth.as_ref()
    }

    pub fn counters(&self) -> SplitCounters {
        self.counters
    }

    pub fn split_events(&self) -> &[SplitEvent] {
        &self.split_log
    }

    pub fn instances_seen(&self) -> u64 {
        self.instances_seen
    }

    pub fn trained_weight(&self) -> f64 {
        self.trained_weight
    }

    pub fn leaves(&self) -> impl Iterator<Item = &LeafNode> {
        self.nodes.iter().filter_map(|n| match n {
            Node::Leaf(l) => Some(l),
            Node::Split(_) => None,
        })
    }

    /// Index of the node the instance is routed to.
    pub fn leaf_index(&self, instance: &Instance) -> usize {
        let mut index = 0;
        while let Node::Split(split) = &self.nodes[index] {
            index = split.children[split.test.branch(instance.values[split.attribute])];
        }
        index
    }

    pub fn sort_to_leaf(&self, instance: &Instance) -> &LeafNode {
        match &self.nodes[self.leaf_index(instance)] {
            Node::Leaf(leaf) => leaf,
            Node::Split(_) => unreachable!("routing ends at a leaf"),
        }
    }

    pub fn predict(&self, instance: &Instance) -> (usize, Vec<f64>) {
        self.sort_to_leaf(instance)
            .predict(self.config.leaf_prediction, instance)
    }

    /// Predicts `instance` with the current model, then learns from it.
    /// Returns the prediction made before the update.
    pub fn train_one(&mut self, instance: &Instance) -> Result<usize> {
        let class = instance
            .label
            .ok_or_else(|| Error::contract("cannot train on an unlabeled instance"))?;
        self.schema.validate(instance)?;
        let index = self.leaf_index(instance);
        let Node::Leaf(leaf) = &mut self.nodes[index] else {
            unreachable!("routing ends at a leaf")
        };
        let (prediction, _) = leaf.predict(self.config.leaf_prediction, instance);
        leaf.learn(instance, class)?;
        self.instances_seen += 1;
        self.trained_weight += instance.weight;

        let due =
            leaf.weight_seen() - leaf.weight_at_last_check() > f64::from(self.config.grace_period);
        if leaf.dist.is_impure() && due {
            self.attempt_split(index);
        }
        Ok(prediction)
    }

    pub fn size(&self) -> TreeSize {
        let leaves = self.leaves().count();
        let mut depth = 0;
        let mut stack = vec![(0usize, 0usize)];
        while let Some((index, d)) = stack.pop() {
            depth = depth.max(d);
            if let Node::Split(split) = &self.nodes[index] {
                stack.extend(split.children.iter().map(|&c| (c, d + 1)));
            }
        }
        TreeSize {
            nodes: self.nodes.len(),
            leaves,
            depth,
        }
    }

    /// Rough model footprint in bytes, for comparing trees rather than for
    /// accounting.
    pub fn estimated_bytes(&self) -> usize {
        let registry = self
            .growth
            .as_ref()
            .map_or(0, |g| g.registry().len() * 3 * size_of::<u64>());
        self.nodes
            .iter()
            .map(|n| match n {
                Node::Leaf(l) => l.estimated_bytes(),
                Node::Split(s) => size_of::<Node>() + s.children.len() * size_of::<usize>(),
            })
            .sum::<usize>()
            + registry
    }

    fn new_leaf(&mut self, dist: ClassDistribution, excluded: Vec<bool>) -> LeafNode {
        let id = self.next_leaf_id;
        self.next_leaf_id += 1;
        LeafNode::new(id, dist, excluded, &self.schema, self.config.numeric_bins)
    }

    fn push_leaf(&mut self, leaf: LeafNode) -> usize {
        let index = self.nodes.len();
        if let Some(growth) = &mut self.growth {
            growth.register_leaf(leaf.id, index);
        }
        self.nodes.push(Node::Leaf(leaf));
        index
    }

    fn leaf_mut(&mut self, index: usize) -> &mut LeafNode {
        match &mut self.nodes[index] {
            Node::Leaf(leaf) => leaf,
            Node::Split(_) => panic!("node {index} is not a leaf"),
        }
    }

    fn attempt_split(&mut self, index: usize) {
        self.counters.attempts += 1;
        let leaf = self.leaf_mut(index);
        let mut rank: Vec<SplitCandidate> = leaf
            .observers
            .iter()
            .enumerate()
            .filter(|(attribute, _)| !leaf.deactivated.contains(attribute))
            .filter_map(|(attribute, o)| o.as_ref()?.best_split(attribute, &leaf.dist))
            .collect();
        // stable: equal merits keep attribute order
        rank.sort_by(|a, b| b.merit.total_cmp(&a.merit));
        let weight = leaf.weight_seen();
        leaf.weight_at_last_check = weight;
        let leaf_entropy = entropy(&leaf.dist);

        let Some(best) = rank.first() else { return };
        if best.merit <= 0.0 {
            return;
        }
        self.counters.gated += 1;
        let bound = hoeffding_bound(
            gain_range(self.schema.class_count()),
            self.config.delta,
            weight,
        )
        .expect("validated delta and positive weight");
        let check = SplitCheck {
            best_merit: best.merit,
            second_merit: rank.get(1).map_or(0.0, |c| c.merit),
            hoeffding_bound: bound,
            tie_threshold: self.config.tie_threshold,
            leaf_entropy,
            leaf_weight: weight,
        };

        let should_split = match (self.algorithm.variant(), &mut self.growth) {
            (Some(variant), Some(growth)) => {
                let nodes = &self.nodes;
                let outcome = growth.can_split(
                    &check,
                    |registry| {
                        leaf_entropy_stats(registry.values().map(|&i| match &nodes[i] {
                            Node::Leaf(l) => entropy(&l.dist),
                            Node::Split(_) => unreachable!("registry holds leaves only"),
                        }))
                    },
                    variant,
                    self.config.skip_rule,
                );
                if outcome != GateOutcome::FailedVfdt {
                    self.counters.vfdt_satisfied += 1;
                }
                outcome.splits()
            }
            _ => {
                let ok = check.satisfies_vfdt();
                if ok {
                    self.counters.vfdt_satisfied += 1;
                }
                ok
            }
        };

        if should_split {
            let best = rank.swap_remove(0);
            self.split_leaf(index, best);
        } else {
            let retain = self.config.retain_deactivated;
            deactivate_poor_attributes(self.leaf_mut(index), &rank, bound, retain);
        }
    }

    fn split_leaf(&mut self, index: usize, candidate: SplitCandidate) {
        let grown = SplitEvent {
            instance: self.instances_seen,
            attribute: candidate.attribute,
            merit: candidate.merit,
        };
        self.install_split(
            index,
            candidate.attribute,
            candidate.test,
            candidate.post_split,
        );
        self.counters.splits += 1;
        self.split_log.push(grown);
    }

    /// Replaces leaf `index` by a split node whose children start from
    /// `post_split`.
    fn install_split(
        &mut self,
        index: usize,
        attribute: usize,
        test: SplitTest,
        post_split: Vec<ClassDistribution>,
    ) {
        debug_assert_eq!(test.branch_count(), post_split.len());
        let placeholder = Node::Split(SplitNode {
            attribute,
            test,
            children: Vec::new(),
        });
        let Node::Leaf(parent) = std::mem::replace(&mut self.nodes[index], placeholder) else {
            panic!("node {index} is not a leaf");
        };
        if let Some(growth) = &mut self.growth {
            growth.unregister_leaf(parent.id);
        }
        let mut excluded = parent.excluded;
        if matches!(test, SplitTest::Multiway { .. }) {
            excluded[attribute] = true;
        }
        let children = post_split
            .into_iter()
            .map(|dist| {
                let leaf = self.new_leaf(dist, excluded.clone());
                self.push_leaf(leaf)
            })
            .collect();
        self.nodes[index] = Node::Split(SplitNode {
            attribute,
            test,
            children,
        });
    }
}

/// Deactivates every attribute whose best merit trails the leader's by more
/// than `bound`, discarding its observer unless `retain` is set. The leader
/// itself is never deactivated.
pub fn deactivate_poor_attributes(
    leaf: &mut LeafNode,
    rank: &[SplitCandidate],
    bound: f64,
    retain: bool,
) {
    let Some(best) = rank.first() else { return };
    for candidate in &rank[1..] {
        if best.merit - candidate.merit > bound && candidate.attribute != best.attribute {
            leaf.deactivated.insert(candidate.attribute);
            if !retain {
                leaf.observers[candidate.attribute] = None;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::Attribute;

    fn numeric_schema(attrs: usize) -> Schema {
        Schema::with_class_count(
            (0..attrs)
                .map(|i| Attribute::numeric(format!("x{i}")))
                .collect(),
            2,
        )
        .unwrap()
    }

    fn dist(w: &[f64]) -> ClassDistribution {
        ClassDistribution::from_weights(w.to_vec())
    }

    fn leaf_at(tree: &HoeffdingTree, values: &[f64]) -> usize {
        tree.leaf_index(&Instance::unlabeled(values.to_vec()))
    }

    #[test]
    fn fresh_tree() {
        let tree = HoeffdingTree::vfdt(numeric_schema(1), TreeConfig::default()).unwrap();
        assert_eq!(
            tree.size(),
            TreeSize {
                nodes: 1,
                leaves: 1,
                depth: 0
            }
        );
        assert_eq!(leaf_at(&tree, &[3.0]), 0);
        let (class, scores) = tree.predict(&Instance::unlabeled(vec![3.0]));
        assert_eq!(class, 0);
        assert_eq!(scores, vec![0.5, 0.5]);
    }

    #[test]
    fn rejects_invalid_config() {
        let schema = numeric_schema(1);
        for config in [
            TreeConfig {
                grace_period: 0,
                ..TreeConfig::default()
            },
            TreeConfig {
                delta: 1.0,
                ..TreeConfig::default()
            },
            TreeConfig {
                tie_threshold: -0.1,
                ..TreeConfig::default()
            },
            TreeConfig {
                numeric_bins: 0,
                ..TreeConfig::default()
            },
        ] {
            assert!(HoeffdingTree::vfdt(schema.clone(), config).is_err());
        }
    }

    #[test]
    fn threshold_boundary_goes_left() {
        let mut tree = HoeffdingTree::vfdt(numeric_schema(1), TreeConfig::default()).unwrap();
        tree.install_split(
            0,
            0,
            SplitTest::Threshold(5.0),
            vec![dist(&[1.0, 0.0]), dist(&[0.0, 1.0])],
        );
        assert_eq!(
            tree.size(),
            TreeSize {
                nodes: 3,
                leaves: 2,
                depth: 1
            }
        );
        assert_eq!(leaf_at(&tree, &[5.0]), 1);
        assert_eq!(leaf_at(&tree, &[5.000001]), 2);
    }

    #[test]
    fn depth_two_routing_and_size() {
        // x0 <= 0 ? (x1 <= 10 ? A : B) : (x1 multiway-free numeric <= -3 ? C : D)
        let mut tree = HoeffdingTree::vfdt(numeric_schema(2), TreeConfig::default()).unwrap();
        let half = || vec![dist(&[1.0, 1.0]), dist(&[1.0, 1.0])];
        tree.install_split(0, 0, SplitTest::Threshold(0.0), half());
        tree.install_split(1, 1, SplitTest::Threshold(10.0), half());
        tree.install_split(2, 1, SplitTest::Threshold(-3.0), half());
        let (a, b, c, d) = (3, 4, 5, 6);
        let cases = [
            ([-1.0, 10.0], a),
            ([0.0, 11.0], b),
            ([0.5, -3.0], c),
            ([7.0, -2.9], d),
        ];
        for (values, expected) in cases {
            assert_eq!(leaf_at(&tree, &values), expected, "{values:?}");
        }
        assert_eq!(
            tree.size(),
            TreeSize {
                nodes: 7,
                leaves: 4,
                depth: 2
            }
        );
        // lopsided third split
        tree.install_split(d, 0, SplitTest::Threshold(8.0), half());
        assert_eq!(
            tree.size(),
            TreeSize {
                nodes: 9,
                leaves: 5,
                depth: 3
            }
        );
        assert_eq!(leaf_at(&tree, &[9.0, 0.0]), 8);
    }

    #[test]
    fn nominal_split_removes_attribute_below() {
        let schema =
            Schema::with_class_count(vec![Attribute::nominal("a", 3), Attribute::numeric("b")], 2)
                .unwrap();
        let mut tree = HoeffdingTree::vfdt(schema, TreeConfig::default()).unwrap();
        tree.install_split(
            0,
            0,
            SplitTest::Multiway { arity: 3 },
            vec![dist(&[1.0, 0.0]); 3],
        );
        assert_eq!(tree.size().leaves, 3);
        for leaf in tree.leaves() {
            assert!(leaf.observer(0).is_none());
            assert!(leaf.observer(1).is_some());
            assert_eq!(leaf.weight_at_last_check(), leaf.weight_seen());
        }
        assert_eq!(leaf_at(&tree, &[2.0, 0.0]), 3);
    }

    #[test]
    fn majority_predictions() {
        let mut leaf = LeafNode::new(0, dist(&[3.0, 7.0]), vec![false], &numeric_schema(1), 10);
        let x = Instance::unlabeled(vec![0.0]);
        assert_eq!(leaf.predict(LeafPrediction::MajorityClass, &x).0, 1);
        leaf.dist = dist(&[5.0, 5.0]);
        assert_eq!(leaf.predict(LeafPrediction::MajorityClass, &x).0, 0);
    }

    #[test]
    fn naive_bayes_hand_worked() {
        // one binary attribute; class 0 saw value 0 three times and value 1
        // once, class 1 saw value 1 twice.
        let schema = Schema::with_class_count(vec![Attribute::nominal("a", 2)], 2).unwrap();
        let mut leaf = LeafNode::new(0, ClassDistribution::new(2), vec![false], &schema, 10);
        for (v, c) in [(0.0, 0), (0.0, 0), (0.0, 0), (1.0, 0), (1.0, 1), (1.0, 1)] {
            leaf.learn(&Instance::labeled(vec![v], c), c).unwrap();
        }
        // P(c=0)=4/6, P(v=1|0)=(1+1)/(4+2)=1/3; P(c=1)=2/6, P(v=1|1)=(2+1)/(2+2)=3/4
        let p0 = 4.0 / 6.0 * (1.0 / 3.0);
        let p1 = 2.0 / 6.0 * 0.75;
        let (class, scores) =
            leaf.predict(LeafPrediction::NaiveBayes, &Instance::unlabeled(vec![1.0]));
        assert_eq!(class, 1);
        assert!((scores[1] - p1 / (p0 + p1)).abs() < 1e-12);
        // majority class would say 0
        assert_eq!(
            leaf.predict(
                LeafPrediction::MajorityClass,
                &Instance::unlabeled(vec![1.0])
            )
            .0,
            0
        );
    }

    #[test]
    fn feature_selection_rules() {
        let schema = numeric_schema(3);
        let cand = |attribute, merit| SplitCandidate {
            attribute,
            test: SplitTest::Threshold(0.0),
            merit,
            post_split: vec![],
        };
        let fresh = || LeafNode::new(0, ClassDistribution::new(2), vec![false; 3], &schema, 10);

        let mut leaf = fresh();
        deactivate_poor_attributes(
            &mut leaf,
            &[cand(0, 0.4), cand(1, 0.4), cand(2, 0.4)],
            0.1,
            false,
        );
        assert!(leaf.deactivated().is_empty());

        let mut leaf = fresh();
        deactivate_poor_attributes(&mut leaf, &[cand(2, 0.9), cand(0, 0.1)], 0.3, false);
        assert_eq!(
            leaf.deactivated().iter().copied().collect::<Vec<_>>(),
            vec![0]
        );
        assert!(leaf.observer(0).is_none() && leaf.observer(2).is_some());

        let mut leaf = fresh();
        deactivate_poor_attributes(&mut leaf, &[cand(2, 0.9), cand(0, 0.1)], 0.3, true);
        assert!(leaf.deactivated().contains(&0) && leaf.observer(0).is_some());

        let mut leaf = fresh();
        deactivate_poor_attributes(&mut leaf, &[cand(2, 0.9), cand(0, 0.1)], 0.85, false);
        assert!(leaf.deactivated().is_empty());
    }

    #[test]
    fn unlabeled_training_is_rejected() {
        let mut tree = HoeffdingTree::vfdt(numeric_schema(1), TreeConfig::default()).unwrap();
        assert!(matches!(
            tree.train_one(&Instance::unlabeled(vec![1.0])),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("cvfdt".parse::<Algorithm>().is_err());
    }
}
