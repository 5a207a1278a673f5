"""Propositional-deduction tasks: liar chains and object counting."""
