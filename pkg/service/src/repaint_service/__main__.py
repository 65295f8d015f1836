"""Run the service: python -m repaint_service [--host H] [--port P]."""

import argparse

import uvicorn


def main():
    parser = argparse.ArgumentParser(prog="repaint_service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8700)
    args = parser.parse_args()
    uvicorn.run("repaint_service.app:app", host=args.host, port=args.port)


if __name__ == "__main__":
    main()
