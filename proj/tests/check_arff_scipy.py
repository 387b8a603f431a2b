"""Loads an exported ARFF with an external reader and checks its shape."""
import sys

from scipy.io import arff

data, meta = arff.loadarff(sys.argv[1])
names = meta.names()
if len(sys.argv) > 3:
    expected_rows, expected_attrs = int(sys.argv[2]), int(sys.argv[3])
    assert len(data) == expected_rows, (len(data), expected_rows)
    assert len(names) == expected_attrs + 1, (len(names), expected_attrs)
assert len(data) > 0
kind, values = meta["class"]
assert kind == "nominal", kind
assert list(values) == ["0", "1", "2", "3"], values
assert all(meta[n][0] == "numeric" for n in names[:-1])
print(f"scipy read {len(data)} rows, {len(names) - 1} numeric attributes, class {{{','.join(values)}}}")
