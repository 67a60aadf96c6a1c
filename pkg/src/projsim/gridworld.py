"""Maze navigation task: a 6 x 9 grid with walls, fixed start and goal.

Cells are addressed as (column x, row y), both 1-based, row 1 at the top.
Every free cell except the goal is a percept; the goal ends the trial.
"""

from __future__ import annotations

import enum
from collections import deque
from pathlib import Path

import numpy as np

DEFAULT_MAZE = """\
.......#G
..#....#.
S.#....#.
..#......
.....#...
.........
"""


class GridAction(enum.IntEnum):
    LEFT = 0
    RIGHT = 1
    UP = 2
    DOWN = 3


_MOVES = {
    GridAction.LEFT: (-1, 0),
    GridAction.RIGHT: (1, 0),
    GridAction.UP: (0, -1),
    GridAction.DOWN: (0, 1),
}

GOAL = -1  # percept sentinel returned on reaching the goal


class EpisodeFinished(RuntimeError):
    pass


class GridWorld:
    n_actions = len(GridAction)

    def __init__(self, width, height, walls, start, goal):
        self.width = int(width)
        self.height = int(height)
        self.walls = frozenset(tuple(c) for c in walls)
        self.start = tuple(start)
        self.goal = tuple(goal)
        for name, cell in (("start", self.start), ("goal", self.goal)):
            if not self.inside(cell):
                raise ValueError(f"{name} cell {cell} lies outside the grid")
            if cell in self.walls:
                raise ValueError(f"{name} cell {cell} is a wall")
        if self.start == self.goal:
            raise ValueError("start and goal coincide")
        self.cells = [
            (x, y)
            for y in range(1, self.height + 1)
            for x in range(1, self.width + 1)
            if (x, y) not in self.walls and (x, y) != self.goal
        ]
        self._index = {c: i for i, c in enumerate(self.cells)}
        self.agent = self.start
        self.done = False

    @classmethod
    def from_text(cls, text: str) -> "GridWorld":
        """Parse a layout: '#' wall, '.' free, 'S' start, 'G' goal."""
        rows = [line.strip() for line in text.strip().splitlines() if line.strip()]
        if not rows:
            raise ValueError("empty maze layout")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("maze rows have unequal length")
        walls, start, goal = set(), None, None
        for y, row in enumerate(rows, start=1):
            for x, ch in enumerate(row, start=1):
                if ch == "#":
                    walls.add((x, y))
                elif ch == "S":
                    start = (x, y)
                elif ch == "G":
                    goal = (x, y)
                elif ch != ".":
                    raise ValueError(f"unknown maze character {ch!r} at ({x}, {y})")
        if start is None or goal is None:
            raise ValueError("maze needs exactly one 'S' and one 'G'")
        return cls(width, len(rows), walls, start, goal)

    @classmethod
    def from_file(cls, path) -> "GridWorld":
        return cls.from_text(Path(path).read_text())

    @property
    def n_percepts(self) -> int:
        return len(self.cells)

    def inside(self, cell) -> bool:
        x, y = cell
        return 1 <= x <= self.width and 1 <= y <= self.height

    def percept_of(self, cell) -> int:
        if cell == self.goal:
            return GOAL
        return self._index[cell]

    def neighbour(self, cell, action) -> tuple:
        """Cell reached from ``cell`` by ``action``; blocked moves stay put."""
        dx, dy = _MOVES[GridAction(action)]
        target = (cell[0] + dx, cell[1] + dy)
        if not self.inside(target) or target in self.walls:
            return cell
        return target

    def reset(self, rng=None) -> int:
        self.agent = self.start
        self.done = False
        return self.percept_of(self.agent)

    def step(self, action):
        """Move the agent; returns ``(percept, reward, done)``."""
        if self.done:
            raise EpisodeFinished("episode finished; call reset() first")
        self.agent = self.neighbour(self.agent, action)
        if self.agent == self.goal:
            self.done = True
            return GOAL, 1.0, True
        return self.percept_of(self.agent), 0.0, False

    def transition_table(self) -> np.ndarray:
        """``next[p, a]``: percept after action ``a`` from percept ``p`` (GOAL on arrival)."""
        table = np.empty((self.n_percepts, self.n_actions), dtype=np.int64)
        for p, cell in enumerate(self.cells):
            for a in GridAction:
                table[p, a] = self.percept_of(self.neighbour(cell, a))
        return table

    def shortest_path_length(self) -> int:
        """Breadth-first search over cells from start to goal."""
        dist = {self.start: 0}
        queue = deque([self.start])
        while queue:
            cell = queue.popleft()
            if cell == self.goal:
                return dist[cell]
            for a in GridAction:
                nxt = self.neighbour(cell, a)
                if nxt not in dist:
                    dist[nxt] = dist[cell] + 1
                    queue.append(nxt)
        raise ValueError("goal is unreachable from start")

    def render(self) -> str:
        lines = []
        for y in range(1, self.height + 1):
            row = ""
            for x in range(1, self.width + 1):
                c = (x, y)
                if c == self.agent and not self.done:
                    row += "A"
                elif c in self.walls:
                    row += "#"
                elif c == self.goal:
                    row += "G"
                elif c == self.start:
                    row += "S"
                else:
                    row += "."
            lines.append(row)
        return "\n".join(lines)


def default_maze() -> GridWorld:
    return GridWorld.from_text(DEFAULT_MAZE)
