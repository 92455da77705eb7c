//! Codeword grammar checking and the bijection between codewords and trees.
//!
//! A valid codeword for `n` nodes and bound `delta` is `s` followed by a
//! body word in which `l ... r` bracket a sibling group, `m` separates the
//! members, groups never exceed `delta` members, and `s` marks an only
//! child. Validation is a single left-to-right pass over the symbols with an
//! explicit stack, so failure positions are exact and no recursion depth is
//! involved.

use thiserror::Error;

use crate::model::{Codeword, Params, Symbol, Tree};

/// Why a codeword failed validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureReason {
    /// First symbol is not `s`.
    BadRoot,
    /// A sibling group would exceed `delta` members.
    SiblingOverflow,
    /// An `l` group is never closed by `r`.
    UnclosedGroup,
    /// An `m` or `r` appears with no open group.
    DanglingClose,
    /// Length differs from the requested node count.
    BadLength,
}

impl FailureReason {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureReason::BadRoot => "BadRoot",
            FailureReason::SiblingOverflow => "SiblingOverflow",
            FailureReason::UnclosedGroup => "UnclosedGroup",
            FailureReason::DanglingClose => "DanglingClose",
            FailureReason::BadLength => "BadLength",
        }
    }
}

/// Location and cause of a validation failure. `position` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationFailure {
    pub position: usize,
    pub reason: FailureReason,
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationReport {
    pub failure: Option<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failure.is_none()
    }

    pub fn failure_position(&self) -> Option<usize> {
        self.failure.map(|f| f.position)
    }

    pub fn reason(&self) -> Option<FailureReason> {
        self.failure.map(|f| f.reason)
    }

    fn valid() -> ValidationReport {
        ValidationReport { failure: None }
    }

    fn invalid(position: usize, reason: FailureReason) -> ValidationReport {
        ValidationReport { failure: Some(ValidationFailure { position, reason }) }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("invalid codeword: {} at position {}", .0.reason.as_str(), .0.position)]
    InvalidCodeword(ValidationFailure),
    #[error("node at pre-order index {node} has {children} children, more than delta = {max}")]
    DegreeOverflow { node: usize, children: usize, max: usize },
    #[error("tree has {actual} nodes but params say {expected}")]
    NodeCountMismatch { expected: usize, actual: usize },
}

/// How a node relates to its parent's sibling group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    /// Root or only child: closing it keeps closing outward.
    Chain,
    /// Group member; `last` marks the `r` that completed the group.
    Member { last: bool },
}

/// One open node during the scan.
struct Frame<P> {
    role: Role,
    /// Members consumed so far of this node's (single) child group; 0 when
    /// the children are an `s` chain or absent.
    members: usize,
    /// Position of the `l` that opened the group, for error reporting.
    group_open: usize,
    payload: P,
}

/// Generic scan over a symbol sequence. `open` makes a payload for a node,
/// `close` folds a finished node into its parent's payload. Returns the root
/// payload or the failure. Positions are 1-based.
fn scan<P, FO, FC>(
    symbols: &[Symbol],
    delta: usize,
    mut open: FO,
    mut close: FC,
) -> Result<P, ValidationFailure>
where
    FO: FnMut(usize) -> P,
    FC: FnMut(P, usize, &mut P),
{
    debug_assert!(!symbols.is_empty());
    if symbols[0] != Symbol::S {
        return Err(ValidationFailure { position: 1, reason: FailureReason::BadRoot });
    }
    let mut stack: Vec<Frame<P>> = Vec::with_capacity(16);
    stack.push(Frame { role: Role::Chain, members: 0, group_open: 0, payload: open(1) });

    // Closes nodes upward until the previous member of the innermost
    // incomplete group has been folded. Errors if only the root remains.
    fn close_prev_sibling<P>(
        stack: &mut Vec<Frame<P>>,
        position: usize,
        close: &mut impl FnMut(P, usize, &mut P),
    ) -> Result<(), ValidationFailure> {
        loop {
            if stack.len() == 1 {
                return Err(ValidationFailure { position, reason: FailureReason::DanglingClose });
            }
            let frame = stack.pop().expect("stack underflow");
            let parent = stack.last_mut().expect("root frame");
            close(frame.payload, frame.group_open, &mut parent.payload);
            if frame.role == (Role::Member { last: false }) {
                return Ok(());
            }
        }
    }

    for (idx, &sym) in symbols.iter().enumerate().skip(1) {
        let pos = idx + 1;
        match sym {
            Symbol::S => {
                stack.push(Frame { role: Role::Chain, members: 0, group_open: 0, payload: open(pos) });
            }
            Symbol::L => {
                if delta < 2 {
                    return Err(ValidationFailure { position: pos, reason: FailureReason::SiblingOverflow });
                }
                let top = stack.last_mut().expect("root frame");
                debug_assert_eq!(top.members, 0, "an open group always has a member frame above it");
                top.members = 1;
                top.group_open = pos;
                stack.push(Frame {
                    role: Role::Member { last: false },
                    members: 0,
                    group_open: 0,
                    payload: open(pos),
                });
            }
            Symbol::M | Symbol::R => {
                close_prev_sibling(&mut stack, pos, &mut close)?;
                let top = stack.last_mut().expect("root frame");
                top.members += 1;
                let closing = sym == Symbol::R;
                // An r still has to follow every m, so m may not reach the
                // delta-th slot.
                if top.members + usize::from(!closing) > delta {
                    return Err(ValidationFailure { position: pos, reason: FailureReason::SiblingOverflow });
                }
                if closing {
                    top.members = 0;
                    top.group_open = 0;
                }
                stack.push(Frame {
                    role: Role::Member { last: closing },
                    members: 0,
                    group_open: 0,
                    payload: open(pos),
                });
            }
        }
    }

    // End of input closes everything that is still open.
    loop {
        let frame = stack.pop().expect("root frame");
        if frame.role == (Role::Member { last: false }) {
            let parent = stack.last().expect("member has a parent");
            return Err(ValidationFailure {
                position: parent.group_open,
                reason: FailureReason::UnclosedGroup,
            });
        }
        match stack.last_mut() {
            Some(parent) => close(frame.payload, frame.group_open, &mut parent.payload),
            None => return Ok(frame.payload),
        }
    }
}

/// Checks that `c` is the codeword of some tree with `p.n()` nodes and at
/// most `p.delta()` children per node.
pub fn validate(c: &Codeword, p: Params) -> ValidationReport {
    if c.len() != p.n() {
        let position = if c.len() < p.n() { c.len() + 1 } else { p.n() + 1 };
        return ValidationReport::invalid(position, FailureReason::BadLength);
    }
    match scan(c.symbols(), p.delta(), |_| (), |_, _, _| ()) {
        Ok(()) => ValidationReport::valid(),
        Err(failure) => ValidationReport { failure: Some(failure) },
    }
}

/// Builds the unique tree whose pre-order label word is `c`.
pub fn decode(c: &Codeword, p: Params) -> Result<Tree, CodecError> {
    let report = validate(c, p);
    if let Some(failure) = report.failure {
        return Err(CodecError::InvalidCodeword(failure));
    }
    let tree = scan(
        c.symbols(),
        p.delta(),
        |_| Vec::new(),
        |children, _, parent: &mut Vec<Tree>| parent.push(Tree::new(children)),
    )
    .map(Tree::new)
    .expect("validated codeword decodes");
    Ok(tree)
}

/// Pre-order label word of `t`: root `s`, only child `s`, groups `l m* r`.
pub fn encode(t: &Tree, p: Params) -> Result<Codeword, CodecError> {
    let mut symbols = Vec::new();
    let mut stack: Vec<(&Tree, Symbol)> = vec![(t, Symbol::S)];
    while let Some((node, label)) = stack.pop() {
        let index = symbols.len() + 1; // pre-order index of `node`
        symbols.push(label);
        let kids = node.children();
        if kids.len() > p.delta() {
            return Err(CodecError::DegreeOverflow {
                node: index,
                children: kids.len(),
                max: p.delta(),
            });
        }
        for (i, child) in kids.iter().enumerate().rev() {
            let label = if kids.len() == 1 {
                Symbol::S
            } else if i == 0 {
                Symbol::L
            } else if i == kids.len() - 1 {
                Symbol::R
            } else {
                Symbol::M
            };
            stack.push((child, label));
        }
    }
    if symbols.len() != p.n() {
        return Err(CodecError::NodeCountMismatch { expected: p.n(), actual: symbols.len() });
    }
    Ok(Codeword::from_symbols(symbols).expect("encode always starts with s"))
}

/// `sizes[i]` is the node count of the subtree rooted at position `i + 1`;
/// `sizes[0] == n`.
pub fn preorder_subtree_sizes(c: &Codeword, p: Params) -> Result<Vec<usize>, CodecError> {
    let report = validate(c, p);
    if let Some(failure) = report.failure {
        return Err(CodecError::InvalidCodeword(failure));
    }
    Ok(subtree_sizes_unchecked(c))
}

/// Subtree sizes without re-validating; callers guarantee validity.
pub(crate) fn subtree_sizes_unchecked(c: &Codeword) -> Vec<usize> {
    let mut sizes = vec![0usize; c.len()];
    let total = scan(
        c.symbols(),
        usize::MAX,
        |pos| (pos, 1usize),
        |(pos, size), _, parent: &mut (usize, usize)| {
            sizes[pos - 1] = size;
            parent.1 += size;
        },
    )
    .expect("caller guarantees validity");
    sizes[total.0 - 1] = total.1;
    sizes
}

/// Graphviz export. Nodes are numbered by pre-order index.
pub fn to_dot(t: &Tree) -> String {
    let mut out = String::from("digraph {\n");
    let mut next = 1usize;
    // (node, index of its parent or 0 for the root)
    let mut stack: Vec<(&Tree, usize)> = vec![(t, 0)];
    while let Some((node, parent)) = stack.pop() {
        let index = next;
        next += 1;
        if parent == 0 {
            out.push_str(&format!("  {};\n", index));
        } else {
            out.push_str(&format!("  {} -> {};\n", parent, index));
        }
        // Children must come off the stack in order, but their pre-order
        // indices depend on subtree sizes, so number lazily via the stack.
        for child in node.children().iter().rev() {
            stack.push((child, index));
        }
    }
    out.push_str("}\n");
    out
}

/// Nested parenthesis export: every subtree renders as `(child child ...)`.
pub fn to_parens(t: &Tree) -> String {
    enum Step<'a> {
        Visit(&'a Tree),
        Close,
    }
    let mut out = String::new();
    let mut stack = vec![Step::Visit(t)];
    while let Some(step) = stack.pop() {
        match step {
            Step::Visit(node) => {
                out.push('(');
                stack.push(Step::Close);
                for child in node.children().iter().rev() {
                    stack.push(Step::Visit(child));
                }
            }
            Step::Close => out.push(')'),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cw(text: &str) -> Codeword {
        text.parse().unwrap()
    }

    fn params(n: usize, delta: usize) -> Params {
        Params::new(n, delta).unwrap()
    }

    #[test]
    fn validate_known_words() {
        assert!(validate(&cw("slslrmsrlmsmr"), params(13, 4)).is_valid());
        assert!(validate(&cw("s"), params(1, 1)).is_valid());
        assert!(validate(&cw("s"), params(1, 4)).is_valid());
        assert!(validate(&cw("slr"), params(3, 2)).is_valid());
        assert!(validate(&cw("slmr"), params(4, 3)).is_valid());
        assert!(validate(&cw("sllrr"), params(5, 2)).is_valid());
    }

    #[test]
    fn validate_sibling_overflow_position() {
        let report = validate(&cw("slmmr"), params(5, 3));
        assert_eq!(
            report.failure,
            Some(ValidationFailure { position: 4, reason: FailureReason::SiblingOverflow })
        );
        // Same word is fine one delta up.
        assert!(validate(&cw("slmmr"), params(5, 4)).is_valid());
        // A group at all is an overflow for delta = 1.
        let report = validate(&cw("slr"), params(3, 1));
        assert_eq!(report.reason(), Some(FailureReason::SiblingOverflow));
        assert_eq!(report.failure_position(), Some(2));
    }

    #[test]
    fn validate_group_shape_errors() {
        let report = validate(&cw("slm"), params(3, 3));
        assert_eq!(report.reason(), Some(FailureReason::UnclosedGroup));
        assert_eq!(report.failure_position(), Some(2));

        let report = validate(&cw("srl"), params(3, 3));
        assert_eq!(
            report.failure,
            Some(ValidationFailure { position: 2, reason: FailureReason::DanglingClose })
        );

        let report = validate(&cw("slrm"), params(4, 3));
        assert_eq!(
            report.failure,
            Some(ValidationFailure { position: 4, reason: FailureReason::DanglingClose })
        );

        let report = validate(&cw("ssm"), params(3, 3));
        assert_eq!(report.reason(), Some(FailureReason::DanglingClose));
    }

    #[test]
    fn validate_length_mismatch() {
        let report = validate(&cw("sss"), params(4, 2));
        assert_eq!(
            report.failure,
            Some(ValidationFailure { position: 4, reason: FailureReason::BadLength })
        );
        let report = validate(&cw("sss"), params(2, 2));
        assert_eq!(
            report.failure,
            Some(ValidationFailure { position: 3, reason: FailureReason::BadLength })
        );
    }

    #[test]
    fn decode_known_shapes() {
        // Chain of three nodes.
        let t = decode(&cw("sss"), params(3, 2)).unwrap();
        assert_eq!(t.degree(), 1);
        assert_eq!(t.children()[0].degree(), 1);
        assert_eq!(t.node_count(), 3);

        // Root with two leaf children.
        let t = decode(&cw("slr"), params(3, 2)).unwrap();
        assert_eq!(t.degree(), 2);
        assert!(t.children().iter().all(|c| c.degree() == 0));

        // Root with children (leaf, node with one leaf child).
        let t = decode(&cw("slrs"), params(4, 2)).unwrap();
        assert_eq!(t.degree(), 2);
        assert_eq!(t.children()[0].degree(), 0);
        assert_eq!(t.children()[1].degree(), 1);
    }

    #[test]
    fn decode_rejects_invalid() {
        assert!(matches!(
            decode(&cw("slm"), params(3, 2)),
            Err(CodecError::InvalidCodeword(_))
        ));
    }

    #[test]
    fn encode_known_trees() {
        let single = Tree::leaf();
        assert_eq!(encode(&single, params(1, 4)).unwrap().to_string(), "s");

        let three_leaves = Tree::new(vec![Tree::leaf(), Tree::leaf(), Tree::leaf()]);
        assert_eq!(encode(&three_leaves, params(4, 3)).unwrap().to_string(), "slmr");

        // 13-node example: root has three children; the first is a chain to
        // a two-leaf group, the second has an only child, the third has four
        // children of which the second has an only child.
        let first = Tree::new(vec![Tree::new(vec![Tree::leaf(), Tree::leaf()])]);
        let second = Tree::new(vec![Tree::leaf()]);
        let third = Tree::new(vec![
            Tree::leaf(),
            Tree::new(vec![Tree::leaf()]),
            Tree::leaf(),
            Tree::leaf(),
        ]);
        let tree = Tree::new(vec![first, second, third]);
        assert_eq!(tree.node_count(), 13);
        assert_eq!(encode(&tree, params(13, 4)).unwrap().to_string(), "slslrmsrlmsmr");
    }

    #[test]
    fn encode_degree_overflow_reports_preorder_index() {
        let wide = Tree::new(vec![Tree::leaf(), Tree::leaf(), Tree::leaf()]);
        let t = Tree::new(vec![wide]);
        match encode(&t, params(5, 2)) {
            Err(CodecError::DegreeOverflow { node, children, max }) => {
                assert_eq!(node, 2);
                assert_eq!(children, 3);
                assert_eq!(max, 2);
            }
            other => panic!("expected DegreeOverflow, got {:?}", other),
        }
    }

    #[test]
    fn encode_node_count_mismatch() {
        let t = Tree::new(vec![Tree::leaf()]);
        assert_eq!(
            encode(&t, params(3, 2)),
            Err(CodecError::NodeCountMismatch { expected: 3, actual: 2 })
        );
    }

    #[test]
    fn subtree_sizes_examples() {
        assert_eq!(preorder_subtree_sizes(&cw("sss"), params(3, 2)).unwrap(), vec![3, 2, 1]);
        assert_eq!(preorder_subtree_sizes(&cw("slr"), params(3, 2)).unwrap(), vec![3, 1, 1]);
        assert_eq!(preorder_subtree_sizes(&cw("slrs"), params(4, 2)).unwrap(), vec![4, 1, 2, 1]);
        assert_eq!(
            preorder_subtree_sizes(&cw("slslrmsrlmsmr"), params(13, 4)).unwrap(),
            vec![13, 4, 3, 1, 1, 2, 1, 5, 1, 2, 1, 1, 1]
        );
    }

    #[test]
    fn dot_and_paren_exports() {
        let t = decode(&cw("slrs"), params(4, 2)).unwrap();
        assert_eq!(to_dot(&t), "digraph {\n  1;\n  1 -> 2;\n  1 -> 3;\n  3 -> 4;\n}\n");
        assert_eq!(to_parens(&t), "(()(()))");
        assert_eq!(to_dot(&Tree::leaf()), "digraph {\n  1;\n}\n");
        assert_eq!(to_parens(&Tree::leaf()), "()");
    }

    // Strategy for arbitrary trees with bounded degree.
    fn tree_strategy(delta: usize) -> impl Strategy<Value = Tree> {
        let leaf = Just(Tree::leaf());
        leaf.prop_recursive(5, 40, delta as u32, move |inner| {
            proptest::collection::vec(inner, 0..=delta).prop_map(Tree::new)
        })
    }

    proptest! {
        #[test]
        fn bijection_tree_side(t in tree_strategy(4)) {
            let p = params(t.node_count(), 4);
            let c = encode(&t, p).unwrap();
            let back = decode(&c, p).unwrap();
            prop_assert_eq!(back, t);
        }

        #[test]
        fn subtree_size_sum_rule(t in tree_strategy(3)) {
            let p = params(t.node_count(), 3);
            let c = encode(&t, p).unwrap();
            let sizes = preorder_subtree_sizes(&c, p).unwrap();
            prop_assert_eq!(sizes[0], c.len());
            // Sum rule: every node is 1 plus the sum of its child subtrees.
            // Children of position i start at i+1 and chain by size jumps.
            for i in 0..sizes.len() {
                let mut rest = sizes[i] - 1;
                let mut at = i + 1;
                let mut acc = 0;
                while rest > 0 {
                    acc += sizes[at];
                    rest -= sizes[at];
                    at += sizes[at];
                }
                prop_assert_eq!(acc, sizes[i] - 1);
            }
        }

        // Any string over the alphabet either validates or reports an exact
        // in-bounds failure position; validation never panics.
        #[test]
        fn validate_total_on_alphabet(text in "[slmr]{1,40}") {
            let Ok(c) = text.parse::<Codeword>() else {
                prop_assert!(!text.starts_with('s'));
                return Ok(());
            };
            let p = params(c.len(), 3);
            let report = validate(&c, p);
            if let Some(f) = report.failure {
                prop_assert!(f.position >= 1 && f.position <= c.len());
            } else {
                let t = decode(&c, p).unwrap();
                prop_assert_eq!(encode(&t, p).unwrap(), c);
            }
        }
    }
}
