//! Network topologies and their reduction to decision problems: enumerate
//! the acyclic source→destination routes and aggregate per-link metric
//! values into per-route ratings.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{CriterionSpec, DecisionProblem, ValidationIssue, ValidationRule};

/// Default limit on the number of enumerated routes.
pub const DEFAULT_ROUTE_CAP: usize = 10_000;

/// How per-link values of one metric combine into a per-route value.
/// `HopCount` ignores link values and counts edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AggregationRule {
    Sum,
    Min,
    Max,
    Mean,
    HopCount,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Link {
    pub from: String,
    pub to: String,
    pub metrics: BTreeMap<String, f64>,
}

/// A directed graph with per-link metric values and a fixed source and
/// destination pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Topology {
    pub nodes: Vec<String>,
    pub links: Vec<Link>,
    pub source: String,
    pub destination: String,
    pub rules: BTreeMap<String, AggregationRule>,
}

impl Topology {
    pub fn validate(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();

        let mut node_set: HashSet<&str> = HashSet::new();
        for node in &self.nodes {
            if !node_set.insert(node.as_str()) {
                issues.push(ValidationIssue::new(
                    ValidationRule::DuplicateNode,
                    node.clone(),
                    "duplicate node id",
                ));
            }
        }
        for (role, node) in [("source", &self.source), ("destination", &self.destination)] {
            if !node_set.contains(node.as_str()) {
                issues.push(ValidationIssue::new(
                    ValidationRule::UnknownNode,
                    node.clone(),
                    format!("{role} node is not declared in `nodes`"),
                ));
            }
        }
        if self.source == self.destination {
            issues.push(ValidationIssue::new(
                ValidationRule::SourceEqualsDestination,
                self.source.clone(),
                "source and destination must differ",
            ));
        }

        let mut seen_links: HashSet<(&str, &str)> = HashSet::new();
        for (idx, link) in self.links.iter().enumerate() {
            let subject = format!("link {idx} ({} -> {})", link.from, link.to);
            for endpoint in [&link.from, &link.to] {
                if !node_set.contains(endpoint.as_str()) {
                    issues.push(ValidationIssue::new(
                        ValidationRule::UnknownNode,
                        subject.clone(),
                        format!("endpoint '{endpoint}' is not declared in `nodes`"),
                    ));
                }
            }
            if !seen_links.insert((link.from.as_str(), link.to.as_str())) {
                issues.push(ValidationIssue::new(
                    ValidationRule::DuplicateLink,
                    subject.clone(),
                    "duplicate link; per-pair metric values would be ambiguous",
                ));
            }
            for (metric, rule) in &self.rules {
                if *rule == AggregationRule::HopCount {
                    continue;
                }
                match link.metrics.get(metric) {
                    None => issues.push(ValidationIssue::new(
                        ValidationRule::MissingLinkMetric,
                        subject.clone(),
                        format!("missing value for metric '{metric}'"),
                    )),
                    Some(v) if !v.is_finite() => issues.push(ValidationIssue::new(
                        ValidationRule::NonFiniteLinkMetric,
                        subject.clone(),
                        format!("metric '{metric}' value {v} is not finite"),
                    )),
                    Some(_) => {}
                }
            }
        }

        issues
    }

    /// All simple (cycle-free) directed paths from source to destination, in
    /// lexicographic order of their node sequences. An unreachable
    /// destination yields an empty list.
    pub fn enumerate_routes(&self) -> Result<Vec<Vec<String>>, Error> {
        self.enumerate_routes_capped(DEFAULT_ROUTE_CAP)
    }

    pub fn enumerate_routes_capped(&self, cap: usize) -> Result<Vec<Vec<String>>, Error> {
        let issues = self.validate();
        if !issues.is_empty() {
            return Err(Error::Validation(issues));
        }

        let mut adjacency: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for node in &self.nodes {
            adjacency.entry(node.as_str()).or_default();
        }
        for link in &self.links {
            adjacency
                .get_mut(link.from.as_str())
                .unwrap()
                .push(link.to.as_str());
        }
        // Visiting neighbours in id order makes the DFS emit paths in
        // lexicographic order directly.
        for neighbours in adjacency.values_mut() {
            neighbours.sort_unstable();
        }

        let mut routes = Vec::new();
        let mut path = vec![self.source.as_str()];
        let mut visited: HashSet<&str> = path.iter().copied().collect();
        self.dfs(
            self.source.as_str(),
            &adjacency,
            &mut path,
            &mut visited,
            &mut routes,
            cap,
        )?;
        Ok(routes)
    }

    fn dfs<'a>(
        &'a self,
        current: &'a str,
        adjacency: &BTreeMap<&'a str, Vec<&'a str>>,
        path: &mut Vec<&'a str>,
        visited: &mut HashSet<&'a str>,
        routes: &mut Vec<Vec<String>>,
        cap: usize,
    ) -> Result<(), Error> {
        if current == self.destination {
            if routes.len() >= cap {
                return Err(Error::RouteCapExceeded { cap });
            }
            routes.push(path.iter().map(|s| s.to_string()).collect());
            return Ok(());
        }
        for &next in &adjacency[current] {
            if visited.insert(next) {
                path.push(next);
                self.dfs(next, adjacency, path, visited, routes, cap)?;
                path.pop();
                visited.remove(next);
            }
        }
        Ok(())
    }

    /// Builds a decision problem with one alternative per enumerated route;
    /// each rating aggregates the route's link values under the metric's
    /// declared rule. Row order matches [`enumerate_routes`](Self::enumerate_routes).
    pub fn build_problem(
        &self,
        criteria: &[CriterionSpec],
        hard: bool,
    ) -> Result<DecisionProblem, Error> {
        self.build_problem_capped(criteria, hard, DEFAULT_ROUTE_CAP)
    }

    pub fn build_problem_capped(
        &self,
        criteria: &[CriterionSpec],
        hard: bool,
        cap: usize,
    ) -> Result<DecisionProblem, Error> {
        let routes = self.enumerate_routes_capped(cap)?;

        let mut issues = Vec::new();
        if routes.is_empty() {
            issues.push(ValidationIssue::new(
                ValidationRule::EmptyRouteSet,
                format!("{} -> {}", self.source, self.destination),
                "no acyclic route connects the source to the destination",
            ));
        }
        for crit in criteria {
            if !self.rules.contains_key(&crit.name) {
                issues.push(ValidationIssue::new(
                    ValidationRule::UnknownMetric,
                    crit.name.clone(),
                    "criterion has no aggregation rule in the topology",
                ));
            }
        }
        if !issues.is_empty() {
            return Err(Error::Validation(issues));
        }

        let link_metrics: BTreeMap<(&str, &str), &BTreeMap<String, f64>> = self
            .links
            .iter()
            .map(|l| ((l.from.as_str(), l.to.as_str()), &l.metrics))
            .collect();

        let ratings = routes
            .iter()
            .map(|route| {
                criteria
                    .iter()
                    .map(|crit| {
                        let rule = self.rules[&crit.name];
                        aggregate(route, &link_metrics, &crit.name, rule)
                    })
                    .collect()
            })
            .collect();

        Ok(DecisionProblem {
            alternatives: routes.iter().map(|r| r.join("->")).collect(),
            criteria: criteria.to_vec(),
            ratings,
            hard,
        })
    }
}

fn aggregate(
    route: &[String],
    link_metrics: &BTreeMap<(&str, &str), &BTreeMap<String, f64>>,
    metric: &str,
    rule: AggregationRule,
) -> f64 {
    let hops = route.len() - 1;
    if rule == AggregationRule::HopCount {
        return hops as f64;
    }
    let values = route.windows(2).map(|hop| {
        // Validation guarantees the link and its metric value exist.
        link_metrics[&(hop[0].as_str(), hop[1].as_str())][metric]
    });
    match rule {
        AggregationRule::Sum => values.sum(),
        AggregationRule::Min => values.fold(f64::INFINITY, f64::min),
        AggregationRule::Max => values.fold(f64::NEG_INFINITY, f64::max),
        AggregationRule::Mean => values.sum::<f64>() / hops as f64,
        AggregationRule::HopCount => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Nature;

    fn link(from: &str, to: &str, metrics: &[(&str, f64)]) -> Link {
        Link {
            from: from.into(),
            to: to.into(),
            metrics: metrics.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    fn diamond() -> Topology {
        Topology {
            nodes: vec!["s".into(), "a".into(), "b".into(), "t".into()],
            links: vec![
                link("s", "a", &[("delay", 1.0), ("rate", 1000.0)]),
                link("a", "t", &[("delay", 2.0), ("rate", 2000.0)]),
                link("s", "b", &[("delay", 3.0), ("rate", 1500.0)]),
                link("b", "t", &[("delay", 1.0), ("rate", 1500.0)]),
            ],
            source: "s".into(),
            destination: "t".into(),
            rules: [
                ("delay".to_string(), AggregationRule::Sum),
                ("rate".to_string(), AggregationRule::Mean),
                ("hops".to_string(), AggregationRule::HopCount),
            ]
            .into(),
        }
    }

    #[test]
    fn single_link_yields_one_route() {
        let topo = Topology {
            nodes: vec!["s".into(), "t".into()],
            links: vec![link("s", "t", &[("delay", 1.0)])],
            source: "s".into(),
            destination: "t".into(),
            rules: [("delay".to_string(), AggregationRule::Sum)].into(),
        };
        assert_eq!(
            topo.enumerate_routes().unwrap(),
            vec![vec!["s".to_string(), "t".to_string()]]
        );
    }

    #[test]
    fn diamond_yields_two_routes_in_lexicographic_order() {
        let routes = diamond().enumerate_routes().unwrap();
        assert_eq!(
            routes,
            vec![
                vec!["s".to_string(), "a".to_string(), "t".to_string()],
                vec!["s".to_string(), "b".to_string(), "t".to_string()],
            ]
        );
    }

    #[test]
    fn fully_connected_four_node_digraph_has_five_paths() {
        let names = ["n1", "n2", "n3", "n4"];
        let mut links = Vec::new();
        for from in names {
            for to in names {
                if from != to {
                    links.push(link(from, to, &[]));
                }
            }
        }
        let topo = Topology {
            nodes: names.iter().map(|s| s.to_string()).collect(),
            links,
            source: "n1".into(),
            destination: "n4".into(),
            rules: [("hops".to_string(), AggregationRule::HopCount)].into(),
        };
        let routes = topo.enumerate_routes().unwrap();
        let expected: Vec<Vec<String>> = [
            vec!["n1", "n2", "n3", "n4"],
            vec!["n1", "n2", "n4"],
            vec!["n1", "n3", "n2", "n4"],
            vec!["n1", "n3", "n4"],
            vec!["n1", "n4"],
        ]
        .into_iter()
        .map(|p| p.into_iter().map(String::from).collect())
        .collect();
        assert_eq!(routes, expected);
    }

    #[test]
    fn unreachable_destination_yields_empty_list() {
        let topo = Topology {
            nodes: vec!["s".into(), "x".into(), "t".into()],
            links: vec![link("t", "x", &[])],
            source: "s".into(),
            destination: "t".into(),
            rules: BTreeMap::new(),
        };
        assert!(topo.enumerate_routes().unwrap().is_empty());
    }

    #[test]
    fn route_cap_overflow_is_an_error() {
        match diamond().enumerate_routes_capped(1) {
            Err(Error::RouteCapExceeded { cap: 1 }) => {}
            other => panic!("expected cap overflow, got {other:?}"),
        }
    }

    #[test]
    fn dangling_link_endpoint_is_flagged() {
        let mut topo = diamond();
        topo.links
            .push(link("a", "ghost", &[("delay", 1.0), ("rate", 1.0)]));
        let issues = topo.validate();
        assert!(issues
            .iter()
            .any(|i| i.rule == ValidationRule::UnknownNode && i.subject.contains("ghost")));
    }

    #[test]
    fn missing_link_metric_is_flagged() {
        let mut topo = diamond();
        topo.links[0].metrics.remove("rate");
        let issues = topo.validate();
        assert!(issues
            .iter()
            .any(|i| i.rule == ValidationRule::MissingLinkMetric));
    }

    #[test]
    fn build_problem_aggregates_by_rule() {
        let criteria = vec![
            CriterionSpec::new("delay", Nature::Cost, 0.5),
            CriterionSpec::new("rate", Nature::Benefit, 0.3),
            CriterionSpec::new("hops", Nature::Cost, 0.2),
        ];
        let problem = diamond().build_problem(&criteria, false).unwrap();
        assert_eq!(problem.alternatives, vec!["s->a->t", "s->b->t"]);
        assert_eq!(problem.ratings[0], vec![3.0, 1500.0, 2.0]);
        assert_eq!(problem.ratings[1], vec![4.0, 1500.0, 2.0]);
        assert!(problem.validate().is_empty());
    }

    #[test]
    fn min_and_max_rules_pick_bottleneck_values() {
        let mut topo = diamond();
        topo.rules.insert("rate".into(), AggregationRule::Min);
        topo.rules.insert("delay".into(), AggregationRule::Max);
        let criteria = vec![
            CriterionSpec::new("delay", Nature::Cost, 0.5),
            CriterionSpec::new("rate", Nature::Benefit, 0.5),
        ];
        let problem = topo.build_problem(&criteria, false).unwrap();
        assert_eq!(problem.ratings[0], vec![2.0, 1000.0]);
        assert_eq!(problem.ratings[1], vec![3.0, 1500.0]);
    }

    #[test]
    fn hop_count_rule_counts_edges_on_longer_routes() {
        let topo = Topology {
            nodes: vec!["s".into(), "x".into(), "y".into(), "t".into()],
            links: vec![
                link("s", "x", &[]),
                link("x", "y", &[]),
                link("y", "t", &[]),
            ],
            source: "s".into(),
            destination: "t".into(),
            rules: [("hops".to_string(), AggregationRule::HopCount)].into(),
        };
        let criteria = vec![CriterionSpec::new("hops", Nature::Cost, 1.0)];
        let problem = topo.build_problem(&criteria, false).unwrap();
        assert_eq!(problem.ratings, vec![vec![3.0]]);
    }

    #[test]
    fn unknown_metric_is_an_error() {
        let criteria = vec![CriterionSpec::new("loss", Nature::Cost, 1.0)];
        match diamond().build_problem(&criteria, false) {
            Err(Error::Validation(issues)) => {
                assert!(issues
                    .iter()
                    .any(|i| i.rule == ValidationRule::UnknownMetric));
            }
            other => panic!("expected validation failure, got {other:?}"),
        }
    }

    #[test]
    fn empty_route_set_is_an_error() {
        let topo = Topology {
            nodes: vec!["s".into(), "t".into()],
            links: vec![],
            source: "s".into(),
            destination: "t".into(),
            rules: [("hops".to_string(), AggregationRule::HopCount)].into(),
        };
        let criteria = vec![CriterionSpec::new("hops", Nature::Cost, 1.0)];
        match topo.build_problem(&criteria, false) {
            Err(Error::Validation(issues)) => {
                assert!(issues
                    .iter()
                    .any(|i| i.rule == ValidationRule::EmptyRouteSet));
            }
            other => panic!("expected validation failure, got {other:?}"),
        }
    }
}
