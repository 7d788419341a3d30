"""Integer encoding of a Fes for the evaluation kernels.

Both kernels (pure Python and compiled) consume the same flat form:
elements and variables become indices, lattice structure becomes |U| x |U|
tables, and each right-hand side becomes a postfix program over those
indices.  Keeping the encoding here means the two kernels stay twins.
"""

from __future__ import annotations

from dataclasses import dataclass

from .eqs import Apply, Const, Join, Meet, Var
from .specs import Fes, Sign

# postfix opcodes: every instruction is an (opcode, argument) pair
OP_CONST = 0
OP_VAR = 1
OP_MEET = 2   # argument: how many operands to fold (0 means top)
OP_JOIN = 3   # argument: how many operands to fold (0 means bottom)
OP_APPLY = 4  # argument: operator id


@dataclass
class EncodedFes:
    n_vars: int
    m: int
    leq: list        # m*m flat, 0/1
    meet: list       # m*m flat, element indices
    join: list       # m*m flat
    bot: int
    top: int
    programs: list   # per var: flat [code, arg, code, arg, ...]
    op_tables: list  # per op id: flat table, base-m indexed
    op_arities: list
    spec_signs: list  # 0 = mu, 1 = nu
    spec_vars: list   # var indices


def _compile_expr(e, var_index, elem_index, op_index, out):
    if isinstance(e, Const):
        out.extend((OP_CONST, elem_index[e.value]))
    elif isinstance(e, Var):
        out.extend((OP_VAR, var_index[e.name]))
    elif isinstance(e, Meet):
        for a in e.args:
            _compile_expr(a, var_index, elem_index, op_index, out)
        out.extend((OP_MEET, len(e.args)))
    elif isinstance(e, Join):
        for a in e.args:
            _compile_expr(a, var_index, elem_index, op_index, out)
        out.extend((OP_JOIN, len(e.args)))
    elif isinstance(e, Apply):
        for a in e.args:
            _compile_expr(a, var_index, elem_index, op_index, out)
        out.extend((OP_APPLY, op_index[e.op]))
    else:
        raise TypeError(f"not an expression: {e!r}")


def encode(f: Fes) -> EncodedFes:
    es = f.es
    lat = es.lattice
    m = len(lat.elements)
    elem_index = lat.index
    var_index = {x: i for i, x in enumerate(es.vars)}

    leq = [0] * (m * m)
    meet = [0] * (m * m)
    join = [0] * (m * m)
    for a in lat.elements:
        ia = elem_index[a]
        for b in lat.elements:
            ib = elem_index[b]
            leq[ia * m + ib] = 1 if lat.leq(a, b) else 0
            meet[ia * m + ib] = elem_index[lat.meet(a, b)]
            join[ia * m + ib] = elem_index[lat.join(a, b)]

    op_names = sorted(es.ops)
    op_index = {name: i for i, name in enumerate(op_names)}
    op_tables = []
    op_arities = []
    for name in op_names:
        op = es.ops[name]
        flat = [0] * (m ** op.arity)
        for key, value in op.table.items():
            idx = 0
            for k in key:
                idx = idx * m + elem_index[k]
            flat[idx] = elem_index[value]
        op_tables.append(flat)
        op_arities.append(op.arity)

    programs = []
    for x in es.vars:
        prog = []
        _compile_expr(es.rhs[x], var_index, elem_index, op_index, prog)
        programs.append(prog)

    return EncodedFes(
        n_vars=len(es.vars),
        m=m,
        leq=leq,
        meet=meet,
        join=join,
        bot=elem_index[lat.bottom],
        top=elem_index[lat.top],
        programs=programs,
        op_tables=op_tables,
        op_arities=op_arities,
        spec_signs=[0 if s is Sign.MU else 1 for s, _ in f.spec],
        spec_vars=[var_index[x] for _, x in f.spec],
    )


def encode_valuation(f: Fes, v) -> tuple:
    lat = f.es.lattice
    return tuple(lat.index[v[x]] for x in f.es.vars)


def decode_valuation(f: Fes, eta: tuple) -> dict:
    els = f.es.lattice.elements
    return {x: els[i] for x, i in zip(f.es.vars, eta)}
