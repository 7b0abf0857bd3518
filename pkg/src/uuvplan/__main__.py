from uuvplan.cli import main
raise SystemExit(main())
