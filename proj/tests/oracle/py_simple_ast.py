#!/usr/bin/env python3
"""Reference conversion of CPython's `ast` into the simplified node format.

Used as an independent oracle for the C++ parser: the output JSON is what
`parse_source` must produce for the same file. Conventions:

* spans are (lineno, end_lineno); decorated definitions start at the first
  decorator; nodes without positions (arguments, comprehension, withitem,
  match_case) span their children, and an empty `arguments` sits on the
  header line of its def/lambda;
* only Name (identifier) and Constant (verbatim source segment) carry values;
* operator nodes are emitted in source order with span null (CPython does not
  record operator positions);
* JoinedStr internals are emitted as null because CPython 3.10 reports
  unreliable positions inside f-strings.

Usage: py_simple_ast.py FILE [FILE...]  -> JSON list, one tree per file.
"""
import ast
import json
import sys

OPERATOR_TYPES = (ast.operator, ast.boolop, ast.unaryop, ast.cmpop)


def op_node(op):
    return {"kind": type(op).__name__, "value": None, "span": None, "children": []}


def key_of(node, converted):
    if hasattr(node, "lineno"):
        return (node.lineno, node.col_offset)
    return converted.get("_key", (converted["span"][0], 0))


class Converter:
    def __init__(self, source):
        self.lines = source.splitlines(keepends=True)

    def segment(self, node):
        """Verbatim source text of a node (utf-8 column offsets)."""
        first = node.lineno - 1
        last = node.end_lineno - 1
        if first == last:
            return self.lines[first].encode()[node.col_offset:node.end_col_offset].decode()
        parts = [self.lines[first].encode()[node.col_offset:].decode()]
        parts.extend(self.lines[first + 1:last])
        parts.append(self.lines[last].encode()[:node.end_col_offset].decode())
        return "".join(parts)

    def convert(self, node, header=None):
        kind = type(node).__name__
        out = {"kind": kind, "value": None, "span": None, "children": []}

        if isinstance(node, ast.Name):
            out["value"] = node.id
        elif isinstance(node, ast.Constant):
            out["value"] = self.segment(node)

        if isinstance(node, ast.JoinedStr):
            out["span"] = [node.lineno, node.end_lineno]
            out["children"] = None
            return out

        children = self.children_of(node)
        out["children"] = children

        if hasattr(node, "end_lineno") and node.end_lineno is not None:
            start = node.lineno
            decorators = getattr(node, "decorator_list", None)
            if decorators:
                start = min([start] + [d.lineno for d in decorators])
            out["span"] = [start, node.end_lineno]
        else:
            spans = [c["span"] for c in children if c["span"] is not None]
            if spans:
                out["span"] = [min(s[0] for s in spans), max(s[1] for s in spans)]
                out["_key"] = min(c["_sort"] for c in children if c["span"] is not None)
            else:
                out["span"] = [header[0], header[0]]
                out["_key"] = header
        return out

    def children_of(self, node):
        if isinstance(node, ast.BinOp):
            return [self.wrap(node.left), op_node(node.op), self.wrap(node.right)]
        if isinstance(node, ast.UnaryOp):
            return [op_node(node.op), self.wrap(node.operand)]
        if isinstance(node, ast.BoolOp):
            values = [self.wrap(v) for v in node.values]
            return values[:1] + [op_node(node.op)] + values[1:]
        if isinstance(node, ast.Compare):
            out = [self.wrap(node.left)]
            for op, comparator in zip(node.ops, node.comparators):
                out.append(op_node(op))
                out.append(self.wrap(comparator))
            return out
        if isinstance(node, ast.AugAssign):
            return [self.wrap(node.target), op_node(node.op), self.wrap(node.value)]

        header = None
        if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef, ast.Lambda)):
            header = (node.lineno, node.col_offset)

        collected = []
        for _, value in ast.iter_fields(node):
            items = value if isinstance(value, list) else [value]
            for item in items:
                if not isinstance(item, ast.AST):
                    continue
                if isinstance(item, (ast.expr_context,) + OPERATOR_TYPES):
                    continue
                if isinstance(item, ast.arguments):
                    collected.append(self.wrap(item, header))
                else:
                    collected.append(self.wrap(item))
        collected.sort(key=lambda c: c["_sort"])
        return collected

    def wrap(self, node, header=None):
        converted = self.convert(node, header)
        converted["_sort"] = key_of(node, converted)
        return converted


def strip(tree):
    tree.pop("_sort", None)
    tree.pop("_key", None)
    if tree["children"] is not None:
        for child in tree["children"]:
            strip(child)
    return tree


def convert_source(source):
    module = ast.parse(source)
    lines = source.count("\n") + (0 if source.endswith("\n") or not source else 1)
    converter = Converter(source)
    body = [converter.wrap(stmt) for stmt in module.body]
    root = {"kind": "Module", "value": None, "span": [1, max(1, lines)], "children": body}
    return strip(root)


def main(paths):
    trees = []
    for path in paths:
        with open(path, encoding="utf-8") as handle:
            trees.append(convert_source(handle.read()))
    json.dump(trees, sys.stdout)


if __name__ == "__main__":
    main(sys.argv[1:])
