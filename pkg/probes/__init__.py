"""
Probe registry, probe runner and census driver.

Probe ids follow the dotted problem numbering (e.g. "1.3.05.1"); the
registry in probe_registry.yaml maps each id to a runner in runners.py.
"""
