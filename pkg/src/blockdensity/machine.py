"""A minimal counter machine standing in for a fixed program enumeration.

Instructions are INC r (increment a register), DECJZ r t (decrement register r,
or jump to t when it is zero) and HALT. Every natural number decodes to a
program through iterated Cantor unpairing, jump targets clamping to the program
end, so the enumeration is total. Input goes into register 0 and the output is
register 0 at the halt; runs are step-bounded and exceeding the budget is
reported explicitly, never silently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .numerics import cantor_pair, cantor_unpair

INC = "INC"
DECJZ = "DECJZ"
HALT = "HALT"

Instruction = tuple
Program = list

# Plain simulation switches to state-recurrence detection past this many steps;
# an exact repeat of (pc, registers) proves the run can never halt.
_CYCLE_CHECK_AFTER = 64


@dataclass(frozen=True)
class Halted:
    value: int
    steps: int


@dataclass(frozen=True)
class OutOfBudget:
    budget: int


Outcome = Union[Halted, OutOfBudget]


@dataclass(frozen=True)
class TotalTable:
    values: dict


@dataclass(frozen=True)
class NotTotalWithinBudget:
    witness: int


@dataclass(frozen=True)
class TailHalts:
    """Every input above the budget halts with value input + offset."""

    offset: int
    steps: int


@dataclass(frozen=True)
class TailDiverges:
    """Every input above the budget exhausts the budget."""


def decode(e: int) -> Program:
    """Total decoding of a natural number into a program."""
    if e < 0:
        raise ValueError("program index must be a natural number")
    count, body = cantor_unpair(e)
    codes = []
    for _ in range(count):
        code, body = cantor_unpair(body)
        codes.append(code)
    program: Program = []
    for code in codes:
        tag, operand = cantor_unpair(code)
        if tag == 0:
            program.append((INC, operand))
        elif tag == 1:
            r, target = cantor_unpair(operand)
            program.append((DECJZ, r, min(target, count)))
        else:
            program.append((HALT,))
    return program


def encode(program: Program) -> int:
    """One index whose decoding is the given program (canonical opcode tags)."""
    codes = []
    for ins in program:
        if ins[0] == INC:
            codes.append(cantor_pair(0, ins[1]))
        elif ins[0] == DECJZ:
            codes.append(cantor_pair(1, cantor_pair(ins[1], ins[2])))
        elif ins[0] == HALT:
            codes.append(cantor_pair(2, 0))
        else:
            raise ValueError("unknown instruction %r" % (ins,))
    body = 0
    for code in reversed(codes):
        body = cantor_pair(code, body)
    return cantor_pair(len(program), body)


def identity_index() -> int:
    """The least index decoding to the empty program (immediate halt)."""
    e = 0
    while decode(e):
        e += 1
    return e


def program_text(program: Program) -> str:
    """One instruction per line, operands space-separated."""
    lines = []
    for ins in program:
        lines.append(" ".join(str(part) for part in ins))
    return "\n".join(lines)


def _simulate(program: Program, x: int, budget: int) -> Outcome:
    """Literal step-by-step run; input in register 0."""
    n = len(program)
    regs = {0: x} if x else {}
    pc = 0
    steps = 0
    seen = None
    while True:
        if pc >= n:
            return Halted(regs.get(0, 0), steps)
        if steps >= budget:
            return OutOfBudget(budget)
        ins = program[pc]
        op = ins[0]
        if op == INC:
            r = ins[1]
            regs[r] = regs.get(r, 0) + 1
            pc += 1
        elif op == DECJZ:
            r = ins[1]
            v = regs.get(r, 0)
            if v:
                if v == 1:
                    del regs[r]
                else:
                    regs[r] = v - 1
                pc += 1
            else:
                pc = ins[2]
        else:
            return Halted(regs.get(0, 0), steps + 1)
        steps += 1
        if seen is None:
            if steps >= _CYCLE_CHECK_AFTER:
                seen = {(pc, tuple(sorted(regs.items())))}
        else:
            state = (pc, tuple(sorted(regs.items())))
            if state in seen:
                return OutOfBudget(budget)
            seen.add(state)


def tail_behavior(program: Program, budget: int) -> TailHalts | TailDiverges:
    """Joint outcome of the program on every input strictly above the budget.

    Register 0 loses at most one unit per step, so on such inputs it can never
    be zero when tested; the control path is therefore identical for all of
    them and only the offset applied to the input needs tracking. A repeat of
    (pc, other registers) proves divergence, since the path never reads the
    offset.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    n = len(program)
    offset = 0
    regs: dict[int, int] = {}
    pc = 0
    steps = 0
    seen = {(0, ())}
    while True:
        if pc >= n:
            return TailHalts(offset, steps)
        if steps >= budget:
            return TailDiverges()
        ins = program[pc]
        op = ins[0]
        if op == INC:
            r = ins[1]
            if r == 0:
                offset += 1
            else:
                regs[r] = regs.get(r, 0) + 1
            pc += 1
        elif op == DECJZ:
            r = ins[1]
            if r == 0:
                offset -= 1
                pc += 1
            else:
                v = regs.get(r, 0)
                if v:
                    if v == 1:
                        del regs[r]
                    else:
                        regs[r] = v - 1
                    pc += 1
                else:
                    pc = ins[2]
        else:
            return TailHalts(offset, steps + 1)
        steps += 1
        state = (pc, tuple(sorted(regs.items())))
        if state in seen:
            return TailDiverges()
        seen.add(state)


def run_program(program: Program, x: int, budget: int) -> Outcome:
    """Deterministic step-bounded run of a decoded program."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if x < 0:
        raise ValueError("input must be a natural number")
    if x > budget:
        tail = tail_behavior(program, budget)
        if isinstance(tail, TailHalts):
            return Halted(x + tail.offset, tail.steps)
        return OutOfBudget(budget)
    return _simulate(program, x, budget)


def run(e: int, x: int, budget: int) -> Outcome:
    """Run the e-th program on input x for at most budget steps."""
    return run_program(decode(e), x, budget)


def eval_on_set(
    e: int, xs: Iterable[int], budget: int
) -> TotalTable | NotTotalWithinBudget:
    """Value table over a finite set, or the least input that ran out of budget."""
    program = decode(e)
    table: dict[int, int] = {}
    for x in sorted(set(xs)):
        outcome = run_program(program, x, budget)
        if isinstance(outcome, OutOfBudget):
            return NotTotalWithinBudget(x)
        table[x] = outcome.value
    return TotalTable(table)
