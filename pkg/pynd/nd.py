"""Main module for computing (r, s) nucleus decompositions.
"""
import typing as t

import pynd._internal as _internal
from pynd import graph
from pynd import peeling


class ND:
    """Core class for (r, s) nucleus decomposition.

    Attributes
    ----------
    r : :obj:`int`
        Size of the cliques receiving core numbers.

    s : :obj:`int`
        Size of the cliques whose containment is counted.

    config : :obj:`PeelConfig`
        Resolved configuration, with defaults for ``(r, s)`` filled in.

    graph : :obj:`UndirectedGraph`
        Fitted graph.

    time_fit : :obj:`float`
        Wall time of the last ``fit`` call, in seconds.
    """

    def __init__(self,
                 r: int = 3,
                 s: int = 4,
                 levels: t.Optional[int] = None,
                 contiguous: bool = True,
                 inverse_map: str = "pointer",
                 relabel: t.Optional[bool] = None,
                 aggregation: t.Optional[str] = None,
                 buffer_size: int = _internal.DEFAULT_BUFFER_SIZE,
                 contract: t.Optional[bool] = None,
                 bucket: str = "open",
                 orientation: str = "degeneracy",
                 threads: t.Optional[int] = None,
                 window: int = _internal.DEFAULT_WINDOW,
                 contract_edge_factor: float = _internal.CONTRACT_EDGE_FACTOR,
                 contract_loss_fraction: float = (
                     _internal.CONTRACT_LOSS_FRACTION),
                 seed: int = 0,
                 timeopt: str = "total",
                 suppress_warnings: bool = False) -> None:
        """This class provides easy access for nucleus decomposition.

        Parameters
        ----------
        r : :obj:`int`, optional
            Size of the cliques receiving core numbers. Must be at least 1.

        s : :obj:`int`, optional
            Size of the enclosing cliques. Must be greater than ``r``. The
            pair ``(1, 2)`` gives the k-core decomposition and ``(2, 3)``
            the k-truss decomposition.

        levels : :obj:`int`, optional
            Number of levels of the clique table. If None, two levels are
            used (one when ``r = 1``). One level keys every clique by all
            of its vertices; more levels share common vertex prefixes.

        contiguous : :obj:`bool`, optional
            If True, all last-level tables share a single block of memory.

        inverse_map : :obj:`str`, optional
            How clique indices are mapped back to vertices:

                1. ``pointer``: follow pointers stored after every table.
                   Requires ``contiguous``.

                2. ``binary``: binary search over prefix sums per level.

        relabel : :obj:`bool`, optional
            If True, vertices are renamed by their rank before building the
            table. If None, relabeling is enabled except for ``(2, 3)``.

        aggregation : :obj:`str`, optional
            Strategy collecting the cliques updated in a round, one of
            ``array``, ``list-buffer`` or ``hash``. If None, ``hash`` is
            used for ``(2, 3)`` and ``list-buffer`` otherwise.

        buffer_size : :obj:`int`, optional
            Block size of the ``list-buffer`` strategy.

        contract : :obj:`bool`, optional
            If True, peeled edges are periodically removed from the graph.
            Only applies to ``(2, 3)``, where it is the default.

        bucket : :obj:`str`, optional
            Bucketing structure, ``open`` (window of the lowest buckets) or
            ``dense`` (one bucket per value).

        orientation : :obj:`str`, optional
            Vertex ordering orienting the graph, ``degeneracy`` or
            ``degree``.

        threads : :obj:`int`, optional
            Number of worker threads. If None, one per available CPU.

        window : :obj:`int`, optional
            Number of materialized buckets of the ``open`` structure.

        contract_edge_factor : :obj:`float`, optional
            Contract once this many times ``n`` edges were peeled since the
            last contraction.

        contract_loss_fraction : :obj:`float`, optional
            Rebuild only the lists of vertices that lost this fraction of
            their neighbors.

        seed : :obj:`int`, optional
            Seed of the clique table hash function.

        timeopt : :obj:`str`, optional
            ``total`` records the wall time of every phase in the results;
            ``none`` leaves the timings empty.

        suppress_warnings : :obj:`bool`, optional
            If True, do not show warnings about ignored options.

        Examples
        --------
        >>> from pynd import ND
        >>> from pynd.graph import parse_edge_list
        >>> g = parse_edge_list("0 1\\n0 2\\n0 3\\n1 2\\n1 3\\n2 3\\n")
        >>> res = ND(r=2, s=3).fit(g).extract()
        >>> res.histogram()
        {2: 6}
        """
        self.r, self.s = _internal.check_rs(r, s)

        self.config = peeling.PeelConfig(
            levels=levels,
            contiguous=contiguous,
            inverse_map=inverse_map,
            relabel=relabel,
            aggregation=aggregation,
            buffer_size=buffer_size,
            contract=contract,
            bucket=bucket,
            orientation=orientation,
            threads=threads,
            window=window,
            contract_edge_factor=contract_edge_factor,
            contract_loss_fraction=contract_loss_fraction,
            seed=seed,
        ).resolve(self.r, self.s, suppress_warnings=suppress_warnings)

        self.timeopt = _internal.process_generic_option(
            value=timeopt, group_name="timeopt")

        self.suppress_warnings = suppress_warnings
        self.graph = None  # type: t.Optional[graph.UndirectedGraph]
        self.time_fit = None  # type: t.Optional[float]
        self._workspace = None  # type: t.Optional[peeling.Workspace]

    def __repr__(self) -> str:
        return "ND(r={0}, s={1}, levels={2}, aggregation={3!r})".format(
            self.r, self.s, self.config.levels, self.config.aggregation)

    def fit(self,
            g: t.Union[graph.UndirectedGraph, str],
            verbose: bool = False) -> "ND":
        """Fits a graph into the model.

        The graph is oriented (and relabeled, if enabled) and the table of
        its r-cliques is built.

        Parameters
        ----------
        g : :obj:`UndirectedGraph` or :obj:`str`
            The graph, or the path of a SNAP edge list.

        verbose : :obj:`bool`, optional
            If True, print messages about the fitting stages.

        Returns
        -------
        self

        Raises
        ------
        TypeError
            If ``g`` is neither a graph nor a path.
        """
        if isinstance(g, str):
            g = graph.read_edge_list(g)

        if not isinstance(g, graph.UndirectedGraph):
            raise TypeError('"g" must be an UndirectedGraph or a path '
                            "(got {0}).".format(type(g)))

        self.graph = g
        self._workspace, self.time_fit = _internal.timeit(
            peeling.prepare, g, self.r, self.s, self.config, verbose,
            self.suppress_warnings)

        return self

    def extract(self,
                verbose: bool = False,
                instrument: bool = False,
                corrupt_index: t.Optional[int] = None) -> peeling.PeelResult:
        """Computes the core number of every r-clique of the fitted graph.

        Parameters
        ----------
        verbose : :obj:`bool`, optional
            If True, print a message per peeling round.

        instrument : :obj:`bool`, optional
            If True, record the decrements and levels of the peeling in
            the result ``trace``.

        corrupt_index : :obj:`int`, optional
            Deliberately add one s-clique to this clique index after
            counting. Used to check validation tools.

        Returns
        -------
        :obj:`PeelResult`

        Raises
        ------
        TypeError
            If calling ``extract`` method before ``fit`` method.
        """
        if self._workspace is None:
            raise TypeError("Fitted graph not found. Call "
                            '"fit" method before "extract".')

        if verbose:
            print("Started the ({0}, {1}) nucleus decomposition.".format(
                self.r, self.s))

        # Counts live in the table, so a second run needs a fresh one.
        if self._workspace.table.counts.any():
            self.fit(self.graph)

        res = peeling.run(self._workspace,
                          verbose=verbose,
                          instrument=instrument,
                          corrupt_index=corrupt_index,
                          suppress_warnings=self.suppress_warnings)

        if self.timeopt == "none":
            res.timings = {}

        if verbose:
            print("Nucleus decomposition done.",
                  "Total of {0} {1}-cliques in {2} rounds. Time elapsed "
                  "= {3:.8f} seconds.".format(
                      len(res), self.r, res.rho,
                      sum(res.timings.values())),
                  sep="\n")

        return res

    @classmethod
    def valid_aggregation(cls) -> t.Tuple[str, ...]:
        """Return a tuple of valid update aggregation strategies."""
        return _internal.VALID_AGGREGATION

    @classmethod
    def valid_bucket(cls) -> t.Tuple[str, ...]:
        """Return a tuple of valid bucketing structures."""
        return _internal.VALID_BUCKET

    @classmethod
    def valid_inverse(cls) -> t.Tuple[str, ...]:
        """Return a tuple of valid inverse map methods."""
        return _internal.VALID_INVERSE

    @classmethod
    def valid_orientation(cls) -> t.Tuple[str, ...]:
        """Return a tuple of valid vertex orderings."""
        return _internal.VALID_ORIENTATION

    @classmethod
    def valid_timeopt(cls) -> t.Tuple[str, ...]:
        """Return a tuple of valid time options."""
        return _internal.VALID_TIMEOPT
