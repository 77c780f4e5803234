"""Scenario language, renderers and the command line interface."""

from .parser import ParseError, Scenario, parse_expression, parse_scenario, render_scenario
from .render import from_ast, render, to_ast
from .scenarios import BUILTINS, load_builtin

__all__ = ["ParseError", "Scenario", "parse_expression", "parse_scenario", "render_scenario",
           "from_ast", "render", "to_ast", "BUILTINS", "load_builtin"]
