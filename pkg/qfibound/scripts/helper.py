import multiprocessing
import os


def decor_message(text, opt='simple'):
    text = text.upper()
    if opt == 'header':
        return text
    else:
        return '--- ' + text + ' ---\n'


def end_queue(task_queue, n_processes):
    for _ in range(n_processes):
        task_queue.put(None)
    return task_queue


class Consumer(multiprocessing.Process):
    """ For parallelisation """

    def __init__(self, task_queue, task_function, locks=None, result_queue=None):
        multiprocessing.Process.__init__(self)
        self.task_queue = task_queue
        self.locks = locks
        self.task_function = task_function
        self.result_queue = result_queue

    def run(self):
        while True:
            next_task_args = self.task_queue.get()
            if next_task_args is None:
                self.task_queue.task_done()
                break
            try:
                result = self.task_function(*next_task_args, self.locks)
            except Exception as err:
                # The parent re-raises; the unit index travels with the error.
                result = (next_task_args[0], err)
            self.task_queue.task_done()
            if self.result_queue is not None:
                self.result_queue.put(result)


def log_line(text, log_path, locks):
    with locks['log'], open(log_path, 'a') as f:
        f.write(text + '\n')


def run_units(task_function, units, n_processes, locks):
    """
    Run ``task_function(*unit, locks)`` for every unit and return the results
    sorted by unit index (the first element of each unit and of each result).

    One process runs the units inline; more start Consumers.
    """
    if n_processes == 1:
        results = [task_function(*unit, locks) for unit in units]
    else:
        task_queue = multiprocessing.JoinableQueue(maxsize=n_processes * 2)
        result_queue = multiprocessing.Queue()
        consumers = [Consumer(task_queue=task_queue, task_function=task_function, locks=locks,
                              result_queue=result_queue) for _ in range(n_processes)]
        for p in consumers:
            p.start()
        results = []
        for unit in units:
            task_queue.put(unit)  # Blocked if necessary until a free slot is available.
            while not result_queue.empty():
                results.append(result_queue.get())
        task_queue = end_queue(task_queue, n_processes)
        task_queue.join()
        while len(results) < len(units):
            results.append(result_queue.get())
        for p in consumers:
            p.join()
        for result in results:
            if isinstance(result[1], Exception):
                raise result[1]
    return sorted(results, key=lambda result: result[0])


def read_last_line(filepath):
    if not os.path.exists(filepath):
        return
    with open(filepath, 'rb') as f:
        first = f.readline()
        if first == b'':
            return
        f.seek(-2, os.SEEK_END)
        while f.read(1) != b'\n':
            if f.tell() < 2:
                f.seek(0)
                break
            f.seek(-2, os.SEEK_CUR)
        last = f.readline()
    return last


def is_successful(filepath):
    return read_last_line(filepath) == b'--- SUCCESSFULLY FINISHED ---\n'
