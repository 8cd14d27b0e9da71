//! Processes, channels and references. The lowest-numbered runnable process
//! runs until it finishes, blocks, or reaches a channel primitive.

use super::value::{Action, End, RValue};
use super::{Machine, Program, RuntimeError, R};
use std::collections::{BTreeMap, VecDeque};
use std::io::BufRead;
use std::rc::Rc;

/// Where `getLine` reads from.
pub enum Input {
    Script(VecDeque<String>),
    Stdin,
}

impl Input {
    pub fn script(text: &str) -> Input {
        Input::Script(text.lines().map(str::to_string).collect())
    }

    pub fn read_line(&mut self) -> String {
        match self {
            Input::Script(lines) => lines.pop_front().unwrap_or_default(),
            Input::Stdin => {
                let mut s = String::new();
                let _ = std::io::stdin().lock().read_line(&mut s);
                s.trim_end_matches(['\n', '\r']).to_string()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Status {
    Runnable,
    Blocked(usize, End),
    Finished,
}

struct Process {
    id: usize,
    status: Status,
    current: Option<RValue>,
    konts: Vec<RValue>,
}

#[derive(Debug, Default)]
struct Chan {
    to_b: VecDeque<RValue>,
    to_a: VecDeque<RValue>,
    closed_a: bool,
    closed_b: bool,
}

impl Chan {
    fn incoming(&mut self, e: End) -> &mut VecDeque<RValue> {
        match e {
            End::A => &mut self.to_a,
            End::B => &mut self.to_b,
        }
    }

    fn closed(&self, e: End) -> bool {
        match e {
            End::A => self.closed_a,
            End::B => self.closed_b,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub stdout: String,
    /// Scheduler events, one per line.
    pub transcript: Vec<String>,
    pub result: Option<String>,
    pub error: Option<RuntimeError>,
    pub live_channels: usize,
    pub blocked: Vec<usize>,
    pub live_refs: usize,
    pub world_trace: Vec<u64>,
}

impl RunOutcome {
    pub fn exit_ok(&self) -> bool {
        self.error.is_none() && self.blocked.is_empty()
    }
}

enum Stop {
    Yield,
    Block(usize, End),
    Done(RValue),
}

struct Scheduler<'m, 'p> {
    m: &'m mut Machine<'p>,
    procs: Vec<Process>,
    chans: BTreeMap<usize, Chan>,
    next_chan: usize,
    refs: BTreeMap<usize, RValue>,
    next_ref: usize,
    transcript: Vec<String>,
}

/// Runs the named definition. An `L` computation runs under the scheduler,
/// an `IO` action runs directly; any other value is printed.
pub fn run_main(prog: &Program, entry: &str, input: Input, echo: bool) -> RunOutcome {
    let mut m = Machine::new(prog, input);
    m.echo = echo;
    let mut out = RunOutcome {
        stdout: String::new(),
        transcript: Vec::new(),
        result: None,
        error: None,
        live_channels: 0,
        blocked: Vec::new(),
        live_refs: 0,
        world_trace: Vec::new(),
    };
    let r = (|| -> R<()> {
        let g = prog.find(entry).ok_or_else(|| RuntimeError::Undefined(entry.to_string()))?;
        let v = m.eval(&Default::default(), &super::RTerm::Global(g))?;
        match &v {
            RValue::Action(_) => {
                let mut s = Scheduler { m: &mut m, procs: Vec::new(), chans: BTreeMap::new(), next_chan: 0, refs: BTreeMap::new(), next_ref: 0, transcript: Vec::new() };
                let r = s.run(v);
                out.transcript = std::mem::take(&mut s.transcript);
                out.live_channels = s.chans.len();
                out.live_refs = s.refs.len();
                out.blocked = s.procs.iter().filter(|p| matches!(p.status, Status::Blocked(..))).map(|p| p.id).collect();
                let v = r?;
                out.result = Some(s.m.show(&v));
                Ok(())
            }
            RValue::Con(c, _) if prog.globals.name(*c) == "MkIO" => {
                let x = m.run_io(v)?;
                out.result = Some(m.show(&x));
                Ok(())
            }
            _ => {
                let s = m.show(&v);
                m.write_line(&s);
                out.result = Some(s);
                Ok(())
            }
        }
    })();
    out.error = r.err();
    out.stdout = std::mem::take(&mut m.stdout);
    out.world_trace = std::mem::take(&mut m.world_trace);
    out
}

impl Scheduler<'_, '_> {
    fn log(&mut self, s: String) {
        self.transcript.push(s);
    }

    /// Runs until every process has finished; the main result.
    fn run(&mut self, main: RValue) -> R<RValue> {
        self.procs.push(Process { id: 0, status: Status::Runnable, current: Some(main), konts: Vec::new() });
        self.log("spawn p0".into());
        let mut result = None;
        loop {
            let next = self.procs.iter().position(|p| match p.status {
                Status::Runnable => true,
                Status::Blocked(c, e) => self.chans.get(&c).is_some_and(|ch| !incoming_ref(ch, e).is_empty()),
                Status::Finished => false,
            });
            let Some(i) = next else { break };
            self.procs[i].status = Status::Runnable;
            match self.step(i)? {
                Stop::Yield => {}
                Stop::Block(c, e) => {
                    let id = self.procs[i].id;
                    self.log(format!("p{id} blocks on c{c}{e:?}"));
                    self.procs[i].status = Status::Blocked(c, e);
                }
                Stop::Done(v) => {
                    let id = self.procs[i].id;
                    self.log(format!("p{id} finished"));
                    self.procs[i].status = Status::Finished;
                    if id == 0 {
                        result = Some(v);
                    }
                }
            }
        }
        let blocked: Vec<usize> = self.procs.iter().filter(|p| matches!(p.status, Status::Blocked(..))).map(|p| p.id).collect();
        if !blocked.is_empty() {
            self.log(format!("deadlock {blocked:?}"));
            return Err(RuntimeError::Deadlock { blocked });
        }
        result.ok_or_else(|| RuntimeError::BadValue("the main process did not finish".into()))
    }

    /// Runs process `i` until it stops.
    fn step(&mut self, i: usize) -> R<Stop> {
        loop {
            let cur = self.procs[i].current.take().expect("a runnable process has work");
            let RValue::Action(a) = &cur else {
                return Err(RuntimeError::BadValue(format!("expected an L action, got {}", self.m.show(&cur))));
            };
            match &**a {
                Action::Pure(v) => match self.procs[i].konts.pop() {
                    Some(k) => {
                        let next = self.m.apply(k, v.clone())?;
                        self.procs[i].current = Some(next);
                    }
                    None => return Ok(Stop::Done(v.clone())),
                },
                Action::Bind(m, k) => {
                    self.procs[i].konts.push(k.clone());
                    self.procs[i].current = Some(m.clone());
                }
                Action::Io(io) => {
                    let v = self.m.run_io(io.clone())?;
                    self.procs[i].current = Some(pure(v));
                }
                Action::Effect(key, args) => {
                    let (next, stop) = self.effect(i, key, args, &cur)?;
                    self.procs[i].current = Some(next);
                    if let Some(s) = stop {
                        return Ok(s);
                    }
                }
            }
        }
    }

    /// Performs one effect. Returns the process's next action and whether
    /// it stops here.
    fn effect(&mut self, i: usize, key: &str, args: &[RValue], cur: &RValue) -> R<(RValue, Option<Stop>)> {
        let id = self.procs[i].id;
        match (key, args) {
            ("ref_new", [v]) => {
                let r = self.next_ref;
                self.next_ref += 1;
                self.refs.insert(r, v.clone());
                Ok((pure(RValue::Ref(r)), None))
            }
            ("ref_read", [RValue::Ref(r)]) => {
                let v = self.refs.get(r).cloned().ok_or_else(|| RuntimeError::Primitive(format!("read of freed reference {r}")))?;
                let res = self.m.prog.con("#")?;
                Ok((pure(RValue::Con(res, Rc::new(vec![v, RValue::Ref(*r)]))), None))
            }
            ("ref_write", [RValue::Ref(r), v]) => {
                let slot = self.refs.get_mut(r).ok_or_else(|| RuntimeError::Primitive(format!("write to freed reference {r}")))?;
                *slot = v.clone();
                Ok((pure(RValue::Ref(*r)), None))
            }
            ("ref_free", [RValue::Ref(r)]) => {
                self.refs.remove(r).ok_or_else(|| RuntimeError::Primitive(format!("double free of reference {r}")))?;
                Ok((pure(self.m.unit()?), None))
            }
            ("ch_fork", [f]) => {
                let c = self.next_chan;
                self.next_chan += 1;
                self.chans.insert(c, Chan::default());
                let child = self.m.apply(f.clone(), RValue::Chan(c, End::B))?;
                let cid = self.procs.len();
                self.procs.push(Process { id: cid, status: Status::Runnable, current: Some(child), konts: Vec::new() });
                self.log(format!("p{id} forks p{cid} on c{c}"));
                Ok((pure(RValue::Chan(c, End::A)), Some(Stop::Yield)))
            }
            ("ch_send", [RValue::Chan(c, e), v]) => {
                let ch = self.chans.get_mut(c).ok_or(RuntimeError::SendOnClosed(*c))?;
                if ch.closed(*e) || ch.closed(e.other()) {
                    return Err(RuntimeError::SendOnClosed(*c));
                }
                ch.incoming(e.other()).push_back(v.clone());
                let shown = self.m.show(v);
                self.log(format!("p{id} sends {shown} on c{c}{e:?}"));
                Ok((pure(RValue::Chan(*c, *e)), Some(Stop::Yield)))
            }
            ("ch_recv", [RValue::Chan(c, e)]) => {
                let ch = self.chans.get_mut(c).ok_or(RuntimeError::RecvOnClosed(*c))?;
                if ch.closed(*e) {
                    return Err(RuntimeError::RecvOnClosed(*c));
                }
                match ch.incoming(*e).pop_front() {
                    Some(v) => {
                        let shown = self.m.show(&v);
                        self.log(format!("p{id} receives {shown} on c{c}{e:?}"));
                        let res = self.m.prog.con("#")?;
                        Ok((pure(RValue::Con(res, Rc::new(vec![v, RValue::Chan(*c, *e)]))), Some(Stop::Yield)))
                    }
                    None if ch.closed(e.other()) => Err(RuntimeError::RecvOnClosed(*c)),
                    None => Ok((cur.clone(), Some(Stop::Block(*c, *e)))),
                }
            }
            ("ch_close", [RValue::Chan(c, e)]) => {
                let ch = self.chans.get_mut(c).ok_or(RuntimeError::RecvOnClosed(*c))?;
                if ch.closed(*e) || !ch.incoming(*e).is_empty() {
                    return Err(RuntimeError::Primitive(format!("close of c{c}{e:?} with unread messages or twice")));
                }
                match e {
                    End::A => ch.closed_a = true,
                    End::B => ch.closed_b = true,
                }
                let gone = ch.closed_a && ch.closed_b;
                if gone {
                    self.chans.remove(c);
                }
                self.log(format!("p{id} closes c{c}{e:?}"));
                Ok((pure(self.m.unit()?), Some(Stop::Yield)))
            }
            _ => {
                let shown: Vec<String> = args.iter().map(|a| self.m.show(a)).collect();
                Err(RuntimeError::Primitive(format!("{key} on {}", shown.join(", "))))
            }
        }
    }
}

fn pure(v: RValue) -> RValue {
    RValue::Action(Rc::new(Action::Pure(v)))
}

fn incoming_ref(ch: &Chan, e: End) -> &VecDeque<RValue> {
    match e {
        End::A => &ch.to_a,
        End::B => &ch.to_b,
    }
}
