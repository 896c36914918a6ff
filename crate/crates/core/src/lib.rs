//! Finite-state transformations of words given by Mealy automata.
//!
//! * [`machine`]: machines, canonical transformations, composition, powers
//!   and sections.
//! * [`wreath`]: the wreath-recursion text format.
//! * [`activity`]: activity growth, its polynomial/exponential class and
//!   the Perron growth rate.
//! * [`orbit`]: the orbit signalizer graph and the order problem.
//! * [`dot`]: Graphviz export.

pub mod activity;
pub mod dot;
pub mod error;
pub mod graph;
pub mod machine;
pub mod orbit;
pub mod wreath;

pub use activity::{
    activity, activity_series, brute_force_activity, classify, determinize, determinize_all,
    growth_rate, pruned_output, ActivityConfig, DetOut, GrowthClass, GrowthRate, PrunedOutputNfa,
};
pub use error::{Error, Result};
pub use machine::{MealyMachine, Transformation, Words};
pub use orbit::{
    build_osg, build_osg_capped, cycle_flags, decide_order, letter_transition,
    letter_transition_capped, power_cycle, power_oracle, walk_costs, CycleFlag, OrderConfig,
    OrderReport, OrderVerdict, OsgEdge, OsgGraph, OsgVertex, PowerCycle, WalkCost,
};
pub use wreath::{parse_wreath, print_wreath, AutomatonSet, Namer};
