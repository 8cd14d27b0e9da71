use crate::core::{GlobalId, Lit};
use crate::erasure::RTerm;
use std::rc::Rc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum End {
    A,
    B,
}

impl End {
    pub fn other(self) -> End {
        match self {
            End::A => End::B,
            End::B => End::A,
        }
    }
}

/// Something waiting for more arguments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Callee {
    Fun(GlobalId),
    Con(GlobalId),
    Prim(GlobalId),
}

#[derive(Debug, Clone)]
pub enum RValue {
    Con(GlobalId, Rc<Vec<RValue>>),
    Closure(REnv, Rc<RTerm>),
    Partial(Callee, usize, Rc<Vec<RValue>>),
    Lit(Lit),
    /// The world token and its generation.
    World(u64),
    Chan(usize, End),
    Ref(usize),
    Action(Rc<Action>),
    Erased,
}

/// An interactive program in `L`, as data for the scheduler.
#[derive(Debug, Clone)]
pub enum Action {
    Pure(RValue),
    Bind(RValue, RValue),
    /// Runs an `IO` value.
    Io(RValue),
    /// An effect handled by the scheduler, by primitive key.
    Effect(&'static str, Vec<RValue>),
}

/// Persistent environment; index 0 is the most recent binding.
#[derive(Debug, Clone, Default)]
pub struct REnv(Option<Rc<Node>>);

#[derive(Debug)]
struct Node {
    value: RValue,
    next: REnv,
}

impl REnv {
    pub fn push(&self, value: RValue) -> REnv {
        REnv(Some(Rc::new(Node { value, next: self.clone() })))
    }

    pub fn get(&self, i: usize) -> Option<&RValue> {
        let mut cur = self;
        for _ in 0..i {
            cur = &cur.0.as_ref()?.next;
        }
        cur.0.as_ref().map(|n| &n.value)
    }

    pub fn from_values(vs: impl IntoIterator<Item = RValue>) -> REnv {
        vs.into_iter().fold(REnv::default(), |e, v| e.push(v))
    }
}
