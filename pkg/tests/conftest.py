import pytest

from focuse.streams import TimedStream

FIG1_TEXT = "<> <a> <b,c> <> <d> <a>"


@pytest.fixture
def fig1() -> TimedStream:
    """The worked-example stream: <> <a> <b,c> <> <d> <a>."""
    return TimedStream.from_names([[], ["a"], ["b", "c"], [], ["d"], ["a"]])
