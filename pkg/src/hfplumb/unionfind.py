"""Disjoint-set forest over consecutive integer ids."""


class UnionFind:
    def __init__(self, count: int = 0):
        self.parent = list(range(count))
        self.size = [1] * count

    def add(self) -> int:
        """Append a new singleton and return its id."""
        i = len(self.parent)
        self.parent.append(i)
        self.size.append(1)
        return i

    def find(self, x: int) -> int:
        root = x
        parent = self.parent
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of ``a`` and ``b``; False if already one set."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def __len__(self) -> int:
        return len(self.parent)
