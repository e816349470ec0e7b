"""Bad/good program pairs per CWE, in the style of a Juliet test suite.

Each template returns the files of one case given `bad`. The bad variant
contains the flaw; the good variant repairs it. Labels are not trusted
from here: the corpus generator runs the oracle on every case and rejects
any case whose observed behavior disagrees with its variant.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable


@dataclass
class CaseSource:
    files: dict  # file name -> text
    ints: object = "i32"  # oracle integer universe
    units: list = field(default_factory=list)  # manifest order; defaults to sorted files


@dataclass
class Template:
    cwe: int
    name: str
    summary: str
    make: Callable[[bool], CaseSource]


TEMPLATES: list = []


def template(cwe: int, name: str, summary: str):
    def deco(fn):
        TEMPLATES.append(Template(cwe, name, summary, fn))
        return fn
    return deco


def _src(text: str) -> str:
    return text.strip("\n") + "\n"


def one(main: str, ints="i32") -> CaseSource:
    return CaseSource({"main.mo": _src(main)}, ints)


def two(lib: str, main: str, ints="i32", lib_name: str = "lib") -> CaseSource:
    return CaseSource({f"{lib_name}.mo": _src(lib), "main.mo": _src(main)}, ints)


# ====================================================================== CWE457

@template(457, "listing", "field read by a method; no constructor stores it")
def _(bad):
    init = "" if bad else "x = 0;"
    lib = f"""
class Gauge {{
  x: i32;
  Gauge() {{ {init} }}

  fn isZero() -> bool {{
    if (x == 0) {{
      return true;
    }}
    return false;
  }}
}}
"""
    main = """
import lib;

fn main() -> i32 {
  let g: Gauge = new Gauge();
  if (g.isZero()) {
    return 0;
  }
  return 1;
}
"""
    return two(lib, main)


@template(457, "out_of_line_ctor", "constructor defined in another unit")
def _(bad):
    lib = """
class Port {
  x: i32;
  y: i32;
  Port();

  fn value() -> i32 {
    return x;
  }
}
"""
    init = f"""
import lib;

Port::Port() {{
  {"y = 1;" if bad else "x = 1;"}
}}
"""
    main = """
import lib;

fn main() -> i32 {
  let p: Port = new Port();
  return p.value();
}
"""
    return CaseSource({"lib.mo": _src(lib), "lib_init.mo": _src(init), "main.mo": _src(main)})


@template(457, "this_access", "read through this")
def _(bad):
    init = "" if bad else "this.x = 4;"
    return one(f"""
class Cell {{
  x: i32;
  Cell() {{ {init} }}

  fn next() -> i32 {{
    return this.x + 1;
  }}
}}

fn main() -> i32 {{
  let c: Cell = new Cell();
  return c.next();
}}
""")


@template(457, "ctor_reads", "constructor reads a field it never stored")
def _(bad):
    body = "y = x + 1;" if bad else "x = 2;\n    y = x + 1;"
    return one(f"""
class Pair {{
  x: i32;
  y: i32;
  Pair() {{
    {body}
  }}
}}

fn main() -> i32 {{
  let p: Pair = new Pair();
  return 0;
}}
""")


@template(457, "helper_method", "read in a helper method called by another method")
def _(bad):
    init = "" if bad else "x = 7;"
    return two(f"""
class Meter {{
  x: i32;
  Meter() {{ {init} }}

  fn raw() -> i32 {{
    return x;
  }}

  fn scaled() -> i32 {{
    return raw() * 10;
  }}
}}
""", """
import lib;

fn main() -> i32 {
  let m: Meter = new Meter();
  return m.scaled();
}
""")


@template(457, "inherited_field", "derived method reads a base field the base never stores")
def _(bad):
    base_ctor = "Base() {}" if bad else "Base() { x = 1; }"
    return two(f"""
class Base {{
  x: i32;
  {base_ctor}
}}

class Derived : Base {{
  y: i32;
  Derived() {{ y = 1; }}

  fn sum() -> i32 {{
    return x + y;
  }}
}}
""", """
import lib;

fn main() -> i32 {
  let d: Derived = new Derived();
  return d.sum();
}
""")


@template(457, "virtual_read", "override reads an unstored field through a base reference")
def _(bad):
    init = "" if bad else "x = 3;"
    return two(f"""
class Shape {{
  Shape() {{}}

  virtual fn area() -> i32 {{
    return 0;
  }}
}}

class Square : Shape {{
  x: i32;
  Square() {{ {init} }}

  virtual fn area() -> i32 {{
    return x * x;
  }}
}}
""", """
import lib;

fn main() -> i32 {
  let s: Shape = new Square();
  return s.area();
}
""")


@template(457, "loop_read", "read inside a loop")
def _(bad):
    init = "" if bad else "step = 2;"
    return one(f"""
class Walker {{
  step: i32;
  Walker() {{ {init} }}

  fn walk() -> i32 {{
    let i: i32 = 0;
    let pos: i32 = 0;
    while (i < 3) {{
      pos = pos + step;
      i = i + 1;
    }}
    return pos;
  }}
}}

fn main() -> i32 {{
  let w: Walker = new Walker();
  return w.walk();
}}
""")


@template(457, "input_guarded", "read only on some inputs")
def _(bad):
    init = "" if bad else "x = 9;"
    return one(f"""
class Probe {{
  x: i32;
  Probe() {{ {init} }}

  fn get(v: var) -> i32 {{
    if (tag_of(v) == Int) {{
      return x;
    }}
    return 0;
  }}
}}

fn main() -> i32 {{
  let p: Probe = new Probe();
  return p.get(extern_input());
}}
""", ints=[0, 1])


@template(457, "partial_init", "constructor stores one field but not the one read")
def _(bad):
    init = "x = 1;" if bad else "x = 1;\n    y = 2;"
    return one(f"""
class Range {{
  x: i32;
  y: i32;
  Range() {{
    {init}
  }}

  fn width() -> i32 {{
    return y - x;
  }}
}}

fn main() -> i32 {{
  let r: Range = new Range();
  return r.width();
}}
""")


@template(457, "free_helper_chain", "read reached through a free function")
def _(bad):
    init = "" if bad else "x = 5;"
    return two(f"""
class Account {{
  x: i32;
  Account() {{ {init} }}

  fn balance() -> i32 {{
    return x;
  }}
}}

fn report(a: Account) -> i32 {{
  return a.balance();
}}
""", """
import lib;

fn main() -> i32 {
  let a: Account = new Account();
  return report(a);
}
""")


@template(457, "bool_field", "boolean field tested before any store")
def _(bad):
    init = "" if bad else "ready = false;"
    return one(f"""
class Job {{
  ready: bool;
  Job() {{ {init} }}

  fn poll() -> i32 {{
    if (!ready) {{
      return 1;
    }}
    return 0;
  }}
}}

fn main() -> i32 {{
  let j: Job = new Job();
  return j.poll();
}}
""")


@template(457, "function_pointer", "read reached through a function pointer")
def _(bad):
    init = "" if bad else "x = 1;"
    return one(f"""
class Sensor {{
  x: i32;
  Sensor() {{ {init} }}

  fn read() -> i32 {{
    return x;
  }}
}}

fn sample(s: Sensor) -> i32 {{
  return s.read();
}}

fn main() -> i32 {{
  let s: Sensor = new Sensor();
  let f: fn(Sensor) -> i32 = &sample;
  return f(s);
}}
""")


@template(457, "setter_before_use", "setter exists; good calls it before the read")
def _(bad):
    call = "" if bad else "c.set(3);"
    return two("""
class Config {
  x: i32;
  Config() {}

  fn set(v: i32) {
    x = v;
  }

  fn get() -> i32 {
    return x;
  }
}
""", f"""
import lib;

fn main() -> i32 {{
  let c: Config = new Config();
  {call}
  return c.get();
}}
""")


@template(457, "setter_from_ctor", "bad calls the setter after the read; good calls it from the constructor")
def _(bad):
    ctor = "Timer() {}" if bad else "Timer() { reset(); }"
    return one(f"""
class Timer {{
  ticks: i32;
  {ctor}

  fn reset() {{
    ticks = 0;
  }}

  fn elapsed() -> i32 {{
    return ticks;
  }}
}}

fn main() -> i32 {{
  let t: Timer = new Timer();
  let e: i32 = t.elapsed();
  t.reset();
  return e;
}}
""")


@template(457, "ctor_param", "good stores a constructor argument")
def _(bad):
    body = "" if bad else "x = v;"
    return one(f"""
class Slot {{
  x: i32;
  Slot(v: i32) {{ {body} }}

  fn get() -> i32 {{
    return x;
  }}
}}

fn main() -> i32 {{
  let s: Slot = new Slot(4);
  return s.get();
}}
""")


@template(457, "nested_objects", "read two calls below main through an owning object")
def _(bad):
    init = "" if bad else "count = 0;"
    return two(f"""
class Counter {{
  count: i32;
  Counter() {{ {init} }}

  fn get() -> i32 {{
    return count;
  }}
}}

class App {{
  c: Counter;
  App() {{
    c = new Counter();
  }}

  fn run() -> i32 {{
    return c.get();
  }}
}}
""", """
import lib;

fn main() -> i32 {
  let a: App = new App();
  return a.run();
}
""")


@template(457, "i8_field", "small signed field compared before any store")
def _(bad):
    init = "" if bad else "level = 0;"
    return one(f"""
class Dimmer {{
  level: i8;
  Dimmer() {{ {init} }}

  fn isOff() -> bool {{
    return level < 1;
  }}
}}

fn main() -> i32 {{
  let d: Dimmer = new Dimmer();
  if (d.isOff()) {{
    return 0;
  }}
  return 1;
}}
""")


@template(457, "while_condition", "field read in a loop condition")
def _(bad):
    init = "" if bad else "pending = 2;"
    return one(f"""
class Queue {{
  pending: i32;
  Queue() {{ {init} }}

  fn drain() -> i32 {{
    let n: i32 = 0;
    while (pending > 0) {{
      pending = pending - 1;
      n = n + 1;
    }}
    return n;
  }}
}}

fn main() -> i32 {{
  let q: Queue = new Queue();
  return q.drain();
}}
""")


@template(457, "derived_ctor_reads_base", "derived constructor reads a base field")
def _(bad):
    base_ctor = "Node() {}" if bad else "Node() { id = 1; }"
    return two(f"""
class Node {{
  id: i32;
  {base_ctor}
}}

class Leaf : Node {{
  key: i32;
  Leaf() {{
    key = id * 2;
  }}
}}
""", """
import lib;

fn main() -> i32 {
  let l: Leaf = new Leaf();
  return 0;
}
""")


@template(457, "rta_dead_class", "good never instantiates the class with the faulty override")
def _(bad):
    made = "Faulty" if bad else "Sound"
    return two("""
class Handler {
  Handler() {}

  virtual fn code() -> i32 {
    return 0;
  }
}

class Sound : Handler {
  Sound() {}

  virtual fn code() -> i32 {
    return 200;
  }
}

class Faulty : Handler {
  status: i32;
  Faulty() {}

  virtual fn code() -> i32 {
    return status;
  }
}
""", f"""
import lib;

fn main() -> i32 {{
  let h: Handler = new {made}();
  return h.code();
}}
""")


@template(457, "dead_method", "good never calls the faulty method")
def _(bad):
    call = "return b.peek();" if bad else "return b.size();"
    return one(f"""
class Buffer {{
  head: i32;
  Buffer() {{}}

  fn peek() -> i32 {{
    return head;
  }}

  fn size() -> i32 {{
    return 0;
  }}
}}

fn main() -> i32 {{
  let b: Buffer = new Buffer();
  {call}
}}
""")


@template(457, "ref_alias", "good initializes the field through a reference parameter")
def _(bad):
    arg = "spare" if bad else "https"
    return two(f"""
fn scheme_is_https(scheme: i32, out: ref bool) -> i32 {{
  out = scheme == 443;
  return 0;
}}

class AltSvc {{
  https: bool;
  spare: bool;

  AltSvc(scheme: i32) {{
    if (scheme_is_https(scheme, {arg}) != 0) {{
      return;
    }}
  }}

  fn insecure() -> bool {{
    return !https;
  }}
}}
""", """
import lib;

fn main() -> i32 {
  let a: AltSvc = new AltSvc(443);
  if (a.insecure()) {
    return 1;
  }
  return 0;
}
""")


# ====================================================================== CWE843

@template(843, "unchecked", "untrusted value read as an integer")
def _(bad):
    use = "return as_int(v);" if bad else "if (tag_of(v) == Int) {\n    return as_int(v);\n  }\n  return 0;"
    return one(f"""
fn main() -> i32 {{
  let v: var = extern_input();
  {use}
}}
""", ints=[0, 1])


@template(843, "wrong_tag_check", "check tests the wrong tag")
def _(bad):
    tag = "Bool" if bad else "Int"
    return one(f"""
fn main() -> i32 {{
  let v: var = extern_input();
  if (tag_of(v) == {tag}) {{
    return as_int(v);
  }}
  return 0;
}}
""", ints=[0, 1])


@template(843, "inverted_check", "access on the branch where the tag is known wrong")
def _(bad):
    body = """  if (tag_of(v) != Int) {
    return as_int(v);
  }
  return 0;""" if bad else """  if (tag_of(v) != Int) {
    return 0;
  }
  return as_int(v);"""
    return one(f"""
fn main() -> i32 {{
  let v: var = extern_input();
{body}
}}
""", ints=[0, 1])


@template(843, "helper_unchecked", "helper function reads its argument unchecked")
def _(bad):
    body = "return as_int(v);" if bad else "if (tag_of(v) == Int) {\n    return as_int(v);\n  }\n  return -1;"
    return one(f"""
fn read_int(v: var) -> i32 {{
  {body}
}}

fn main() -> i32 {{
  return read_int(extern_input());
}}
""", ints=[0, 1])


@template(843, "loop_access", "access repeated in a loop")
def _(bad):
    use = "s = s + as_int(v);" if bad else "if (tag_of(v) == Int) {\n      s = s + as_int(v);\n    }"
    return one(f"""
fn main() -> i32 {{
  let v: var = extern_input();
  let s: i32 = 0;
  let i: i32 = 0;
  while (i < 2) {{
    {use}
    i = i + 1;
  }}
  return s;
}}
""", ints=[0, 1])


@template(843, "field_value", "tagged value stored in a field and read back unchecked")
def _(bad):
    body = "return as_int(v);" if bad else "let t: var = v;\n    if (tag_of(t) == Int) {\n      return as_int(t);\n    }\n    return 0;"
    return one(f"""
class Box {{
  v: var;
  Box(x: var) {{
    v = x;
  }}

  fn get() -> i32 {{
    {body}
  }}
}}

fn main() -> i32 {{
  let b: Box = new Box(extern_input());
  return b.get();
}}
""", ints=[0, 1])


@template(843, "downcast_input", "downcast of an object whose class depends on input")
def _(bad):
    other = "Circle" if bad else "Rect"
    return one(f"""
class Figure {{
  Figure() {{}}
}}

class Rect : Figure {{
  w: i32;
  Rect() {{ w = 2; }}

  fn width() -> i32 {{
    return w;
  }}
}}

class Circle : Figure {{
  r: i32;
  Circle() {{ r = 1; }}
}}

fn main() -> i32 {{
  let v: var = extern_input();
  let f: Figure = new {other}();
  if (tag_of(v) == Int) {{
    f = new Rect();
  }}
  let r: Rect = downcast<Rect>(f);
  return r.width();
}}
""", ints=[0])


@template(843, "as_int8", "untrusted value read as a small integer")
def _(bad):
    use = "let s: i8 = as_int8(v);\n  return s;" if bad else \
        "if (tag_of(v) != Int) {\n    return 0;\n  }\n  let s: i8 = as_int8(v);\n  return s;"
    return one(f"""
fn main() -> i32 {{
  let v: var = extern_input();
  {use}
}}
""", ints=[-1, 1])


@template(843, "ref_param_source", "value produced through a reference parameter")
def _(bad):
    use = "return as_int(v);" if bad else "if (tag_of(v) == Int) {\n    return as_int(v);\n  }\n  return 0;"
    return one(f"""
fn fetch(out: ref var) {{
  out = extern_input();
}}

fn main() -> i32 {{
  let v: var = var_int(0);
  fetch(v);
  {use}
}}
""", ints=[0, 1])


@template(843, "boxed_bool", "boolean boxed and unboxed as an integer")
def _(bad):
    box = "var_bool(true)" if bad else "var_int(5)"
    return one(f"""
fn main() -> i32 {{
  let v: var = {box};
  return as_int(v);
}}
""")


@template(843, "function_pointer", "unchecked reader called through a function pointer")
def _(bad):
    body = "return as_int(v);" if bad else "if (tag_of(v) == Int) {\n    return as_int(v);\n  }\n  return 0;"
    return one(f"""
fn read_int(v: var) -> i32 {{
  {body}
}}

fn main() -> i32 {{
  let f: fn(var) -> i32 = &read_int;
  return f(extern_input());
}}
""", ints=[0, 1])


@template(843, "method_param", "method reads its argument as a boolean")
def _(bad):
    body = "return as_bool(v);" if bad else "if (tag_of(v) == Bool) {\n      return as_bool(v);\n    }\n    return false;"
    return one(f"""
class Parser {{
  Parser() {{}}

  fn flag(v: var) -> bool {{
    {body}
  }}
}}

fn main() -> i32 {{
  let p: Parser = new Parser();
  if (p.flag(extern_input())) {{
    return 1;
  }}
  return 0;
}}
""", ints=[0, 1])


@template(843, "check_int_use_bool", "integer tag checked, boolean read")
def _(bad):
    tag = "Int" if bad else "Bool"
    return one(f"""
fn main() -> i32 {{
  let v: var = extern_input();
  if (tag_of(v) == {tag}) {{
    if (as_bool(v)) {{
      return 1;
    }}
  }}
  return 0;
}}
""", ints=[0, 1])


@template(843, "downcast_param", "helper downcasts its parameter")
def _(bad):
    body = "let d: Dog = downcast<Dog>(a);\n  return d.bark();" if bad else "return a.legs();"
    return one(f"""
class Animal {{
  Animal() {{}}

  virtual fn legs() -> i32 {{
    return 4;
  }}
}}

class Dog : Animal {{
  Dog() {{}}

  fn bark() -> i32 {{
    return 1;
  }}
}}

class Bird : Animal {{
  Bird() {{}}

  virtual fn legs() -> i32 {{
    return 2;
  }}
}}

fn inspect(a: Animal) -> i32 {{
  {body}
}}

fn main() -> i32 {{
  return inspect(new Bird());
}}
""")


@template(843, "downcast_fixed", "downcast of an object of a known wrong class")
def _(bad):
    made = "Truck" if bad else "Car"
    return one(f"""
class Vehicle {{
  Vehicle() {{}}
}}

class Car : Vehicle {{
  seats: i32;
  Car() {{ seats = 4; }}

  fn capacity() -> i32 {{
    return seats;
  }}
}}

class Truck : Vehicle {{
  Truck() {{}}
}}

fn main() -> i32 {{
  let v: Vehicle = new {made}();
  let c: Car = downcast<Car>(v);
  return c.capacity();
}}
""")


@template(843, "or_condition", "disjunctive check admits a second tag")
def _(bad):
    cond = "tag_of(v) == Int || tag_of(v) == Bool" if bad else "tag_of(v) == Int && as_int(v) > 0"
    return one(f"""
fn main() -> i32 {{
  let v: var = extern_input();
  if ({cond}) {{
    return as_int(v);
  }}
  return 0;
}}
""", ints=[0, 1])


@template(843, "nested_check", "outer check excludes only one wrong tag")
def _(bad):
    body = """  if (tag_of(v) != Ref) {
    if (as_bool(v)) {
      return 1;
    }
  }""" if bad else """  if (tag_of(v) != Ref) {
    if (tag_of(v) == Bool) {
      if (as_bool(v)) {
        return 1;
      }
    }
  }"""
    return one(f"""
fn main() -> i32 {{
  let v: var = extern_input();
{body}
  return 0;
}}
""", ints=[0])


@template(843, "swapped_values", "one value checked, the other read")
def _(bad):
    checked = "a" if bad else "b"
    return one(f"""
fn main() -> i32 {{
  let a: var = var_int(1);
  let b: var = extern_input();
  if (tag_of({checked}) == Int) {{
    return as_int(b);
  }}
  return 0;
}}
""", ints=[0, 1])


@template(843, "virtual_handler", "override reads its argument unchecked")
def _(bad):
    body = "return as_int(v);" if bad else "if (tag_of(v) == Int) {\n      return as_int(v);\n    }\n    return 0;"
    return one(f"""
class Handler {{
  Handler() {{}}

  virtual fn handle(v: var) -> i32 {{
    return 0;
  }}
}}

class IntHandler : Handler {{
  IntHandler() {{}}

  virtual fn handle(v: var) -> i32 {{
    {body}
  }}
}}

fn main() -> i32 {{
  let h: Handler = new IntHandler();
  return h.handle(extern_input());
}}
""", ints=[0, 1])


@template(843, "reassigned_in_loop", "value replaced inside a loop after the check")
def _(bad):
    body = """  if (tag_of(v) == Int) {
    while (i < 2) {
      s = s + as_int(v);
      v = extern_input();
      i = i + 1;
    }
  }""" if bad else """  while (i < 2) {
    if (tag_of(v) == Int) {
      s = s + as_int(v);
    }
    v = extern_input();
    i = i + 1;
  }"""
    return one(f"""
fn main() -> i32 {{
  let v: var = extern_input();
  let s: i32 = 0;
  let i: i32 = 0;
{body}
  return s;
}}
""", ints=[1])


@template(843, "loop_condition", "boolean read in a loop condition")
def _(bad):
    cond = "as_bool(v)" if bad else "tag_of(v) == Bool && as_bool(v)"
    return one(f"""
fn main() -> i32 {{
  let v: var = extern_input();
  let n: i32 = 0;
  while ({cond}) {{
    v = var_bool(false);
    n = n + 1;
  }}
  return n;
}}
""", ints=[0])


@template(843, "call_chain", "value passed down two calls before the read")
def _(bad):
    body = "return as_int(v);" if bad else "if (tag_of(v) == Int) {\n    return as_int(v);\n  }\n  return 0;"
    return one(f"""
fn decode(v: var) -> i32 {{
  {body}
}}

fn dispatch(v: var) -> i32 {{
  return decode(v) + 1;
}}

fn main() -> i32 {{
  return dispatch(extern_input());
}}
""", ints=[0, 1])


# ====================================================================== CWE195

def _int_input(name: str = "n") -> str:
    return f"""let v: var = extern_input();
  if (tag_of(v) != Int) {{
    return 0;
  }}
  let {name}: i32 = as_int(v);"""


def _i8_input(name: str = "s") -> str:
    return f"""let v: var = extern_input();
  if (tag_of(v) != Int) {{
    return 0;
  }}
  let {name}: i8 = as_int8(v);"""


@template(195, "let_conversion", "signed value stored in an unsigned variable")
def _(bad):
    use = "let u: u32 = n;\n  return 1;" if bad else "if (n >= 0) {\n    let u: u32 = n;\n  }\n  return 1;"
    return one(f"""
fn main() -> i32 {{
  {_int_input()}
  {use}
}}
""")


@template(195, "argument", "signed value passed for an unsigned parameter")
def _(bad):
    use = "take(n);" if bad else "if (n >= 0) {\n    take(n);\n  }"
    return one(f"""
fn take(size: u32) -> u32 {{
  return size;
}}

fn main() -> i32 {{
  {_int_input()}
  {use}
  return 0;
}}
""")


@template(195, "return_value", "signed value returned as unsigned")
def _(bad):
    body = "return n;" if bad else "if (n < 0) {\n    return 0;\n  }\n  return n;"
    return one(f"""
fn to_unsigned(n: i32) -> u32 {{
  {body}
}}

fn main() -> i32 {{
  {_int_input()}
  to_unsigned(n);
  return 0;
}}
""")


@template(195, "i8_to_u8", "small signed value stored as small unsigned")
def _(bad):
    use = "let b: u8 = s;" if bad else "if (s >= 0) {\n    let b: u8 = s;\n  }"
    return one(f"""
fn main() -> i32 {{
  {_i8_input()}
  {use}
  return 0;
}}
""", ints="i8")


@template(195, "field_store", "signed value stored in an unsigned field")
def _(bad):
    body = "total = n;" if bad else "if (n >= 0) {\n      total = n;\n    }"
    return one(f"""
class Meter {{
  total: u32;
  Meter() {{ total = 0; }}

  fn record(n: i32) {{
    {body}
  }}
}}

fn main() -> i32 {{
  {_int_input()}
  let m: Meter = new Meter();
  m.record(n);
  return 0;
}}
""")


@template(195, "global_store", "signed value stored in an unsigned global")
def _(bad):
    use = "limit = n;" if bad else "if (n >= 0) {\n    limit = n;\n  }"
    return one(f"""
global limit: u32 = 0;

fn main() -> i32 {{
  {_int_input()}
  {use}
  return 0;
}}
""")


@template(195, "off_by_one", "decrement of a value that may be zero")
def _(bad):
    use = "let u: u32 = n - 1;" if bad else "if (n > 0) {\n    let u: u32 = n - 1;\n  }"
    return one(f"""
fn main() -> i32 {{
  {_int_input()}
  {use}
  return 0;
}}
""")


@template(195, "difference", "difference of two inputs stored as unsigned")
def _(bad):
    use = "let u: u32 = d;" if bad else "if (d >= 0) {\n    let u: u32 = d;\n  }"
    return one(f"""
fn main() -> i32 {{
  {_int_input("a")}
  let d: i32 = a - 10;
  {use}
  return 0;
}}
""")


@template(195, "helper_result", "helper result converted to unsigned")
def _(bad):
    use = "let u: u32 = delta(n);" if bad else "let d: i32 = delta(n);\n  if (d >= 0) {\n    let u: u32 = d;\n  }"
    return one(f"""
fn delta(x: i32) -> i32 {{
  return x - 10;
}}

fn main() -> i32 {{
  {_int_input()}
  {use}
  return 0;
}}
""")


@template(195, "ref_out", "length produced through a reference parameter")
def _(bad):
    val = "-1" if bad else "5"
    return one(f"""
fn measure(out: ref i32) {{
  out = {val};
}}

fn main() -> i32 {{
  let len: i32 = 0;
  measure(len);
  let u: u32 = len;
  return 0;
}}
""")


@template(195, "explicit_cast", "good converts with an explicit cast")
def _(bad):
    use = "let u: u32 = n;" if bad else "let u: u32 = cast<u32>(n);"
    return one(f"""
fn main() -> i32 {{
  {_int_input()}
  {use}
  return 0;
}}
""")


@template(195, "constant", "negative constant stored as unsigned")
def _(bad):
    val = "-1" if bad else "1"
    return one(f"""
fn main() -> i32 {{
  let n: i32 = {val};
  let u: u32 = n;
  return 0;
}}
""")


@template(195, "branch_value", "one branch makes the value negative")
def _(bad):
    val = "-5" if bad else "7"
    return one(f"""
fn main() -> i32 {{
  let v: var = extern_input();
  let n: i32 = 5;
  if (tag_of(v) == Bool) {{
    n = {val};
  }}
  let u: u32 = n;
  return 0;
}}
""", ints=[0])


@template(195, "method_argument", "signed value passed to an unsigned method parameter")
def _(bad):
    use = "s.put(n);" if bad else "if (n >= 0) {\n    s.put(n);\n  }"
    return one(f"""
class Sink {{
  Sink() {{}}

  fn put(size: u32) {{
  }}
}}

fn main() -> i32 {{
  {_int_input()}
  let s: Sink = new Sink();
  {use}
  return 0;
}}
""")


@template(195, "upper_bound_only", "bounds check misses the lower bound")
def _(bad):
    cond = "n < 100" if bad else "n >= 0 && n < 100"
    return one(f"""
fn main() -> i32 {{
  {_int_input()}
  if ({cond}) {{
    let u: u32 = n;
  }}
  return 0;
}}
""")


@template(195, "i8_parameter", "small signed value passed for a small unsigned parameter")
def _(bad):
    use = "store(s);" if bad else "if (s >= 0) {\n    store(s);\n  }"
    return one(f"""
fn store(b: u8) -> u8 {{
  return b;
}}

fn main() -> i32 {{
  {_i8_input()}
  {use}
  return 0;
}}
""", ints="i8")


@template(195, "virtual_argument", "signed value passed to an unsigned virtual parameter")
def _(bad):
    use = "a.reserve(n);" if bad else "if (n >= 0) {\n    a.reserve(n);\n  }"
    return one(f"""
class Alloc {{
  Alloc() {{}}

  virtual fn reserve(size: u32) {{
  }}
}}

fn main() -> i32 {{
  {_int_input()}
  let a: Alloc = new Alloc();
  {use}
  return 0;
}}
""")


@template(195, "countdown", "loop counts below zero")
def _(bad):
    body = """  while (n > -3) {
    n = n - 1;
  }""" if bad else """  while (n < 3) {
    n = n + 1;
  }"""
    return one(f"""
fn main() -> i32 {{
  let n: i32 = 0;
{body}
  let u: u32 = n;
  return 0;
}}
""")


@template(195, "clamped_input", "good clamps negative input to zero")
def _(bad):
    clamp = "" if bad else "if (n < 0) {\n      n = 0;\n    }"
    return one(f"""
fn main() -> i32 {{
  let v: var = extern_input();
  let n: i32 = 0;
  if (tag_of(v) == Int) {{
    n = as_int(v);
    {clamp}
  }}
  let u: u32 = n;
  return 0;
}}
""")


@template(195, "scaled", "product of an input converted to unsigned")
def _(bad):
    body = "let u: u32 = n * 2;" if bad else "if (n >= 0 && n < 1000) {\n    let u: u32 = n * 2;\n  }"
    return one(f"""
fn main() -> i32 {{
  {_int_input()}
  {body}
  return 0;
}}
""")


@template(195, "i8_branch", "small signed input stored unsigned on one branch")
def _(bad):
    cond = "s < 50" if bad else "s >= 0 && s < 50"
    return one(f"""
fn main() -> i32 {{
  {_i8_input()}
  if ({cond}) {{
    let b: u8 = s;
  }}
  return 0;
}}
""", ints="i8")


@template(195, "field_offset", "offset kept in a field and returned unsigned")
def _(bad):
    ctor = "off = o;" if bad else "if (o < 0) {\n      off = 0;\n    } else {\n      off = o;\n    }"
    return one(f"""
class Cursor {{
  off: i32;
  Cursor(o: i32) {{
    {ctor}
  }}

  fn position() -> u32 {{
    return off;
  }}
}}

fn main() -> i32 {{
  {_int_input()}
  let c: Cursor = new Cursor(n);
  c.position();
  return 0;
}}
""")


# ====================================================================== CWE194

@template(194, "let_widen", "small signed value widened then used as a size")
def _(bad):
    use = "let n: i32 = s;\n  alloc(n);" if bad else "if (s >= 0) {\n    let n: i32 = s;\n    alloc(n);\n  }"
    return one(f"""
fn main() -> i32 {{
  {_i8_input()}
  {use}
  return 0;
}}
""", ints="i8")


@template(194, "argument_widen", "small signed value passed directly as a size")
def _(bad):
    use = "alloc(s);" if bad else "let n: i32 = s;\n  if (n >= 0) {\n    alloc(n);\n  }"
    return one(f"""
fn main() -> i32 {{
  {_i8_input()}
  {use}
  return 0;
}}
""", ints="i8")


@template(194, "read_size", "small signed value used as a read length")
def _(bad):
    use = "read_buf(b, s);" if bad else "if (s > 0) {\n    read_buf(b, s);\n  }"
    return one(f"""
fn main() -> i32 {{
  {_i8_input()}
  let b: buf = alloc(64);
  {use}
  return 0;
}}
""", ints="i8")


@template(194, "scaled_size", "widened value scaled before use")
def _(bad):
    use = "alloc(n * 4);" if bad else "if (n >= 0) {\n    alloc(n * 4);\n  }"
    return one(f"""
fn main() -> i32 {{
  {_i8_input()}
  let n: i32 = s;
  {use}
  return 0;
}}
""", ints="i8")


@template(194, "helper_sink", "widened at a call, used as a size in the callee")
def _(bad):
    body = "return alloc(n);" if bad else "if (n < 0) {\n    return alloc(0);\n  }\n  return alloc(n);"
    return one(f"""
fn make(n: i32) -> buf {{
  {body}
}}

fn main() -> i32 {{
  {_i8_input()}
  make(s);
  return 0;
}}
""", ints="i8")


@template(194, "helper_widen", "callee widens, caller uses as a size")
def _(bad):
    use = "alloc(widen(s));" if bad else "let n: i32 = widen(s);\n  if (n >= 0) {\n    alloc(n);\n  }"
    return one(f"""
fn widen(x: i8) -> i32 {{
  return x;
}}

fn main() -> i32 {{
  {_i8_input()}
  {use}
  return 0;
}}
""", ints="i8")


@template(194, "loop_sink", "size used inside a loop")
def _(bad):
    guard = "" if bad else "if (s < 0) {\n    return 0;\n  }"
    return one(f"""
fn main() -> i32 {{
  {_i8_input()}
  {guard}
  let i: i32 = 0;
  while (i < 2) {{
    alloc(s);
    i = i + 1;
  }}
  return 0;
}}
""", ints="i8")


@template(194, "narrowed_source", "good narrows to an unsigned type, which zero-extends")
def _(bad):
    ty, lo, hi = ("i8", -128, 128) if bad else ("u8", 0, 256)
    return one(f"""
fn main() -> i32 {{
  {_int_input("raw")}
  if (raw >= {lo} && raw < {hi}) {{
    let s: {ty} = cast<{ty}>(raw);
    alloc(s);
  }}
  return 0;
}}
""", ints=[-2, -1, 0, 1, 200])


@template(194, "through_unsigned", "widened through an unsigned type and back")
def _(bad):
    use = "let w: u32 = s;\n  let n: i32 = w;\n  alloc(n);" if bad else \
        "if (s >= 0) {\n    let w: u32 = s;\n    let n: i32 = w;\n    alloc(n);\n  }"
    return one(f"""
fn main() -> i32 {{
  {_i8_input()}
  {use}
  return 0;
}}
""", ints="i8")


@template(194, "conditional_widen", "widening happens on one branch")
def _(bad):
    assign = "n = s;" if bad else "if (s > 0) {\n      n = s;\n    }"
    return one(f"""
fn main() -> i32 {{
  let v: var = extern_input();
  let n: i32 = 16;
  if (tag_of(v) == Int) {{
    let s: i8 = as_int8(v);
    {assign}
  }}
  alloc(n);
  return 0;
}}
""", ints="i8")


@template(194, "i8_arithmetic", "small signed arithmetic result used as a size")
def _(bad):
    body = "let t: i8 = s - 1;\n  alloc(t);" if bad else "if (s > 0) {\n    let t: i8 = s - 1;\n    alloc(t);\n  }"
    return one(f"""
fn main() -> i32 {{
  {_i8_input()}
  {body}
  return 0;
}}
""", ints="i8")


@template(194, "mixed_operands", "small signed operand widened inside an addition")
def _(bad):
    use = "alloc(n);" if bad else "if (n >= 0) {\n    alloc(n);\n  }"
    return one(f"""
fn main() -> i32 {{
  {_i8_input()}
  let base: i32 = 4;
  let n: i32 = s + base;
  {use}
  return 0;
}}
""", ints="i8")


@template(194, "method_sink", "method reads with a small signed length")
def _(bad):
    body = "read_buf(b, s);" if bad else "if (s >= 0) {\n      read_buf(b, s);\n    }"
    return one(f"""
class Reader {{
  Reader() {{}}

  fn read(b: buf, s: i8) {{
    {body}
  }}
}}

fn main() -> i32 {{
  {_i8_input()}
  let r: Reader = new Reader();
  r.read(alloc(8), s);
  return 0;
}}
""", ints="i8")


@template(194, "ref_source", "small signed value produced through a reference parameter")
def _(bad):
    use = "alloc(s);" if bad else "if (s >= 0) {\n    alloc(s);\n  }"
    return one(f"""
fn fetch(out: ref i8) -> bool {{
  let v: var = extern_input();
  if (tag_of(v) != Int) {{
    return false;
  }}
  out = as_int8(v);
  return true;
}}

fn main() -> i32 {{
  let s: i8 = 0;
  if (fetch(s)) {{
    {use}
  }}
  return 0;
}}
""", ints="i8")


@template(194, "two_level", "widened in one helper, used as a size in the next")
def _(bad):
    body = "return inner(n);" if bad else "if (n < 0) {\n    return inner(0);\n  }\n  return inner(n);"
    return one(f"""
fn inner(n: i32) -> buf {{
  return alloc(n);
}}

fn outer(s: i8) -> buf {{
  let n: i32 = s;
  {body}
}}

fn main() -> i32 {{
  {_i8_input()}
  outer(s);
  return 0;
}}
""", ints="i8")


@template(194, "global_level", "small signed global used as a size")
def _(bad):
    val = "-4" if bad else "4"
    return one(f"""
global level: i8 = {val};

fn main() -> i32 {{
  alloc(level);
  return 0;
}}
""")


@template(194, "wrong_direction", "check bounds the value from above only")
def _(bad):
    cond = "s < 100" if bad else "s > 0"
    return one(f"""
fn main() -> i32 {{
  {_i8_input()}
  if ({cond}) {{
    alloc(s);
  }}
  return 0;
}}
""", ints="i8")


@template(194, "upper_clamp", "clamp limits the maximum but not the minimum")
def _(bad):
    clamp = "if (n > 64) {\n    n = 64;\n  }" if bad else "if (n < 0) {\n    n = 0;\n  }"
    return one(f"""
fn main() -> i32 {{
  {_i8_input()}
  let n: i32 = s;
  {clamp}
  alloc(n);
  return 0;
}}
""", ints="i8")


@template(194, "loop_decrement", "loop drives a small signed value negative")
def _(bad):
    guard = "alloc(s);" if bad else "if (s >= 0) {\n    alloc(s);\n  }"
    return one(f"""
fn main() -> i32 {{
  let s: i8 = 0;
  let i: i32 = 0;
  while (i < 3) {{
    s = s - 1;
    i = i + 1;
  }}
  {guard}
  return 0;
}}
""")


@template(194, "accessor_result", "accessor result widened in the call")
def _(bad):
    body = "alloc(as_int8(v));" if bad else "let s: i8 = as_int8(v);\n    if (s >= 0) {\n      alloc(s);\n    }"
    return one(f"""
fn main() -> i32 {{
  let v: var = extern_input();
  if (tag_of(v) == Int) {{
    {body}
  }}
  return 0;
}}
""", ints="i8")


@template(194, "pool_method", "non-virtual method allocates with a widened size")
def _(bad):
    body = "return alloc(n);" if bad else "if (n < 0) {\n      return alloc(0);\n    }\n    return alloc(n);"
    return one(f"""
class Pool {{
  Pool() {{}}

  fn reserve(n: i32) -> buf {{
    {body}
  }}
}}

fn main() -> i32 {{
  {_i8_input()}
  let p: Pool = new Pool();
  p.reserve(s);
  return 0;
}}
""", ints="i8")


@template(194, "min_vs_max", "bad takes the smaller of a widened value and a constant, good the larger")
def _(bad):
    cmp = "s > 8" if bad else "s < 8"
    return one(f"""
fn main() -> i32 {{
  {_i8_input()}
  let n: i32 = s;
  if ({cmp}) {{
    n = 8;
  }}
  alloc(n);
  return 0;
}}
""", ints="i8")


def templates_for(cwe: int) -> list:
    return [t for t in TEMPLATES if t.cwe == cwe]
